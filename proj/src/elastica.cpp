#include "curvelab/elastica.hpp"

#include <cmath>
#include <cstddef>
#include <vector>

namespace curvelab {
namespace {

constexpr double kPi = 3.14159265358979323846;

// 2 e^{-|u|} / (1 + e^{-2|u|}): even, never overflows, full precision for
// large |u| where the naive 1/cosh path would round through huge values.
double stable_sech(double u) {
  const double e = std::exp(-std::abs(u));
  return 2.0 * e / (1.0 + e * e);
}

// 4 * arctan(exp(u)) without forming exp of a large positive argument:
// for u > 0 use arctan(x) + arctan(1/x) = pi/2.
double quad_arctan_exp(double u) {
  if (u > 0.0) return 4.0 * (0.5 * kPi - std::atan(std::exp(-u)));
  return 4.0 * std::atan(std::exp(u));
}

}  // namespace

BorderlineSample borderline_sample(double epsilon, double s) {
  if (!(epsilon > 0.0) || epsilon > 1.0)
    throw ParameterOutOfRangeError("epsilon must lie in (0, 1]");
  const double scale = std::sqrt(2.0 * epsilon);
  const double u = s / scale;
  BorderlineSample out;
  out.s = s;
  out.epsilon = epsilon;
  out.point = {s - 2.0 * scale * std::tanh(u), 2.0 * scale * stable_sech(u)};
  out.angle = quad_arctan_exp(u);
  out.curvature = std::sqrt(2.0 / epsilon) * stable_sech(u);
  return out;
}

PlanarCurve borderline_curve(double epsilon, double s_lo, double s_hi,
                             std::size_t n) {
  if (!(s_hi > s_lo)) throw ParameterOutOfRangeError("empty arclength window");
  if (n < 2) throw ParameterOutOfRangeError("need at least two samples");
  PlanarCurve curve;
  curve.param = ParamKind::arclength;
  curve.domain = s_hi - s_lo;
  curve.speed = 1.0;
  curve.closed = false;
  curve.samples.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double s = s_lo + (s_hi - s_lo) * double(k) / double(n - 1);
    curve.samples[k] = borderline_sample(epsilon, s).point;
  }
  return curve;
}

StationarityResidual el_residual(const PlanarCurve& curve, double epsilon) {
  validate_curve(curve);
  if (!(epsilon > 0.0)) throw ParameterOutOfRangeError("epsilon must be positive");
  if (curve.size() < 1024)
    throw ParameterOutOfRangeError("residual needs at least 1024 nodes");

  const AngleLifting lifting = lift_tangent(curve);
  const std::vector<double> kappa = curvature_profile(lifting);
  const std::size_t n = kappa.size();
  const double h = lifting.spacing() * lifting.speed;  // arclength step

  StationarityResidual res;
  double sum_sq = 0.0;
  std::size_t counted = 0;
  const bool closed = curve.closed;
  // Open ends switch stencil families within two nodes of the boundary; the
  // error jump there would be amplified by 1/h^2 in the second difference,
  // so the residual is only evaluated from node 4 inward.  Closed grids wrap
  // everywhere and skip the seam duplicate.
  const std::size_t lo = closed ? 0 : 4;
  const std::size_t hi = closed ? n - 2 : n - 5;
  for (std::size_t k = lo; k <= hi; ++k) {
    const double prev = closed && k == 0 ? kappa[n - 2] : kappa[k - 1];
    const double next = closed && k == n - 2 ? kappa[0] : kappa[k + 1];
    const double kss = (next - 2.0 * kappa[k] + prev) / (h * h);
    const double r =
        -kappa[k] + epsilon * (2.0 * kss + kappa[k] * kappa[k] * kappa[k]);
    res.max_abs = std::max(res.max_abs, std::abs(r));
    sum_sq += r * r * h;
    ++counted;
  }
  if (counted == 0) throw ParameterOutOfRangeError("no interior nodes");
  res.l2 = std::sqrt(sum_sq);
  return res;
}

}  // namespace curvelab
