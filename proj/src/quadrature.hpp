#pragma once

// 16-point Gauss-Legendre rule (positive half, symmetric) and a composite
// driver.  Exact for polynomials up to degree 31 per panel; on analytic
// integrands a handful of panels reaches machine precision.

#include <array>
#include <cstddef>

namespace curvelab::detail {

constexpr std::array<double, 8> kGlNode = {
    0.0950125098376374, 0.2816035507792589, 0.4580167776572274,
    0.6178762444026438, 0.7554044083550030, 0.8656312023878318,
    0.9445750230732326, 0.9894009349916499};
constexpr std::array<double, 8> kGlWeight = {
    0.1894506104550685, 0.1826034150449236, 0.1691565193950025,
    0.1495959888165767, 0.1246289712555339, 0.0951585116824928,
    0.0622535239386479, 0.0271524594117541};

template <class F>
double gauss_legendre(F&& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double acc = 0.0;
  for (std::size_t i = 0; i < kGlNode.size(); ++i)
    acc += kGlWeight[i] *
           (f(mid - half * kGlNode[i]) + f(mid + half * kGlNode[i]));
  return half * acc;
}

template <class F>
double composite_gauss_legendre(F&& f, double a, double b, std::size_t panels) {
  double acc = 0.0;
  for (std::size_t p = 0; p < panels; ++p) {
    const double lo = a + (b - a) * double(p) / double(panels);
    const double hi = a + (b - a) * double(p + 1) / double(panels);
    acc += gauss_legendre(f, lo, hi);
  }
  return acc;
}

}  // namespace curvelab::detail
