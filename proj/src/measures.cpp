#include "curvelab/measures.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

#include "curvelab/simplex.hpp"
#include "measure_detail.hpp"

namespace curvelab {
namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

std::vector<double> trapezoid_weights(std::size_t n, double domain) {
  std::vector<double> w(n, 0.0);
  if (n < 2) return w;
  const double h = domain / double(n - 1);
  for (std::size_t k = 0; k < n; ++k) w[k] = h;
  w.front() = 0.5 * h;
  w.back() = 0.5 * h;
  return w;
}

void check_same_domain(const IntervalMeasure& a, const IntervalMeasure& b) {
  const double scale = std::max({a.domain, b.domain, 1.0});
  if (std::abs(a.domain - b.domain) > 1e-9 * scale)
    throw LengthMismatchError("measure domains differ");
}

// Linear interpolation of nodal density values onto an n-node uniform grid.
std::vector<double> resample_density(const std::vector<double>& density,
                                     std::size_t n) {
  std::vector<double> out(n, 0.0);
  if (density.empty()) return out;
  if (density.size() == 1) {
    std::fill(out.begin(), out.end(), density.front());
    return out;
  }
  const std::size_t m = density.size();
  for (std::size_t k = 0; k < n; ++k) {
    const double t = double(k) / double(n - 1) * double(m - 1);
    const std::size_t j = std::min(std::size_t(t), m - 2);
    const double f = t - double(j);
    out[k] = (1.0 - f) * density[j] + f * density[j + 1];
  }
  return out;
}

}  // namespace

double IntervalMeasure::total_mass() const {
  double total = 0.0;
  const auto w = trapezoid_weights(density.size(), domain);
  for (std::size_t k = 0; k < density.size(); ++k) total += w[k] * density[k];
  for (const auto& a : atoms) total += a.weight;
  return total;
}

double IntervalMeasure::total_variation() const {
  double total = 0.0;
  const auto w = trapezoid_weights(density.size(), domain);
  for (std::size_t k = 0; k < density.size(); ++k)
    total += w[k] * std::abs(density[k]);
  for (const auto& a : atoms) total += std::abs(a.weight);
  return total;
}

int AtomicIntegerMeasure::total_index() const {
  int total = 0;
  for (const auto& [pos, c] : atoms) {
    (void)pos;
    total += std::abs(c);
  }
  return total;
}

IntervalMeasure AtomicIntegerMeasure::to_measure() const {
  IntervalMeasure mu;
  mu.domain = domain;
  for (const auto& [pos, c] : atoms)
    if (c != 0) mu.atoms.push_back({pos, kTwoPi * double(c)});
  return mu;
}

void validate_measure(const IntervalMeasure& mu) {
  if (!(mu.domain > 0.0)) throw ParameterOutOfRangeError("measure domain must be positive");
  if (mu.density.size() == 1)
    throw ParameterOutOfRangeError("density grid needs at least two nodes");
  const double slack = 1e-9 * mu.domain;
  for (const auto& a : mu.atoms)
    if (a.position < -slack || a.position > mu.domain + slack)
      throw ParameterOutOfRangeError("atom outside the measure domain");
}

void validate_atomic(const AtomicIntegerMeasure& omega) {
  if (!(omega.domain > 0.0))
    throw ParameterOutOfRangeError("measure domain must be positive");
  for (std::size_t j = 0; j < omega.atoms.size(); ++j) {
    const double pos = omega.atoms[j].first;
    if (pos < 0.0 || pos > omega.domain)
      throw ParameterOutOfRangeError("atom outside the measure domain");
    if (j > 0 && pos < omega.atoms[j - 1].first)
      throw ParameterOutOfRangeError("atoms must be sorted by position");
  }
}

namespace detail {

NodalMasses lump_measure(const IntervalMeasure& mu, std::size_t max_density_nodes) {
  validate_measure(mu);
  const double D = mu.domain;
  const double merge_tol = 1e-12 * D;

  // Density part, rebinned onto a coarser uniform grid when oversampled.
  // Each fine nodal mass splits linearly between the bracketing coarse
  // nodes, preserving total mass and first moment.
  std::vector<double> grid_mass;
  std::size_t grid_n = 0;
  if (!mu.density.empty()) {
    const std::size_t nd = mu.density.size();
    grid_n = std::min(nd, std::max<std::size_t>(max_density_nodes, 2));
    grid_mass.assign(grid_n, 0.0);
    const auto w = trapezoid_weights(nd, D);
    const double fine_h = D / double(nd - 1);
    const double coarse_h = D / double(grid_n - 1);
    for (std::size_t k = 0; k < nd; ++k) {
      const double m = w[k] * mu.density[k];
      const double x = double(k) * fine_h;
      const double t = x / coarse_h;
      const std::size_t j = std::min(std::size_t(t), grid_n - 2);
      const double f = t - double(j);
      grid_mass[j] += (1.0 - f) * m;
      grid_mass[j + 1] += f * m;
    }
  }

  NodalMasses nodes;
  nodes.domain = D;
  if (grid_n > 0) {
    const double coarse_h = D / double(grid_n - 1);
    nodes.pos.resize(grid_n);
    nodes.mass = grid_mass;
    for (std::size_t k = 0; k < grid_n; ++k) nodes.pos[k] = double(k) * coarse_h;
    nodes.pos.back() = D;
  } else {
    nodes.pos = {0.0, D};
    nodes.mass = {0.0, 0.0};
  }

  // Atoms keep their exact positions; coincident ones merge.
  std::vector<Atom> atoms = mu.atoms;
  std::sort(atoms.begin(), atoms.end(),
            [](const Atom& a, const Atom& b) { return a.position < b.position; });
  for (const auto& a : atoms) {
    const double x = std::clamp(a.position, 0.0, D);
    auto it = std::lower_bound(nodes.pos.begin(), nodes.pos.end(), x - merge_tol);
    const std::size_t j = std::size_t(it - nodes.pos.begin());
    if (j < nodes.pos.size() && std::abs(nodes.pos[j] - x) <= merge_tol) {
      nodes.mass[j] += a.weight;
    } else {
      nodes.pos.insert(nodes.pos.begin() + std::ptrdiff_t(j), x);
      nodes.mass.insert(nodes.mass.begin() + std::ptrdiff_t(j), a.weight);
    }
  }
  return nodes;
}

}  // namespace detail

double flat_norm(const IntervalMeasure& mu, const FlatNormOptions& opt) {
  const auto nodes = detail::lump_measure(mu, opt.max_density_nodes);
  const std::size_t n = nodes.pos.size();
  double tv = 0.0;
  for (double m : nodes.mass) tv += std::abs(m);
  if (tv == 0.0) return 0.0;

  // Maximize sum m_i phi_i over |phi| <= u, |phi_{i+1} - phi_i| <= l d_i,
  // u + l <= 1.  Shift psi_i = phi_i + u >= 0 to reach standard form; the
  // right-hand side is then nonnegative, so the origin is feasible.
  const bool periodic = opt.mode == FlatMode::periodic;
  const std::size_t rows = n + 2 * (n - 1) + 1 + (periodic ? 2 : 0);
  const std::size_t cols = n + 2;  // psi_0..psi_{n-1}, u, l
  DenseLp lp;
  lp.rows = rows;
  lp.cols = cols;
  lp.a.assign(rows * cols, 0.0);
  lp.b.assign(rows, 0.0);
  lp.c.assign(cols, 0.0);

  std::size_t r = 0;
  for (std::size_t i = 0; i < n; ++i, ++r) {  // psi_i - 2u <= 0
    lp.at(r, i) = 1.0;
    lp.at(r, n) = -2.0;
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {  // |psi_{i+1} - psi_i| <= l d_i
    const double d = nodes.pos[i + 1] - nodes.pos[i];
    lp.at(r, i + 1) = 1.0;
    lp.at(r, i) = -1.0;
    lp.at(r, n + 1) = -d;
    ++r;
    lp.at(r, i + 1) = -1.0;
    lp.at(r, i) = 1.0;
    lp.at(r, n + 1) = -d;
    ++r;
  }
  lp.at(r, n) = 1.0;  // u + l <= 1
  lp.at(r, n + 1) = 1.0;
  lp.b[r] = 1.0;
  ++r;
  if (periodic) {  // endpoints are the same circle point
    lp.at(r, 0) = 1.0;
    lp.at(r, n - 1) = -1.0;
    ++r;
    lp.at(r, 0) = -1.0;
    lp.at(r, n - 1) = 1.0;
    ++r;
  }

  double mass_total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    lp.c[i] = nodes.mass[i];
    mass_total += nodes.mass[i];
  }
  lp.c[n] = -mass_total;

  const LpSolution sol = solve_lp(lp);
  return std::max(0.0, sol.value);
}

double flat_distance(const IntervalMeasure& mu, const IntervalMeasure& nu,
                     const FlatNormOptions& opt) {
  return flat_norm(subtract(mu, nu), opt);
}

IntervalMeasure subtract(const IntervalMeasure& a, const IntervalMeasure& b) {
  check_same_domain(a, b);
  IntervalMeasure out;
  out.domain = a.domain;
  if (a.density.empty() && b.density.empty()) {
    // nothing to merge
  } else {
    const std::size_t n = std::max(a.density.size(), b.density.size());
    const auto da = resample_density(a.density, n);
    const auto db = resample_density(b.density, n);
    out.density.resize(n);
    for (std::size_t k = 0; k < n; ++k) out.density[k] = da[k] - db[k];
  }
  out.atoms = a.atoms;
  for (const auto& atom : b.atoms) out.atoms.push_back({atom.position, -atom.weight});
  std::sort(out.atoms.begin(), out.atoms.end(),
            [](const Atom& x, const Atom& y) { return x.position < y.position; });
  return out;
}

IntervalMeasure curvature_measure(const AngleLifting& lifting) {
  IntervalMeasure mu;
  mu.domain = lifting.domain;
  const auto kappa = curvature_profile(lifting);
  mu.density.resize(kappa.size());
  for (std::size_t k = 0; k < kappa.size(); ++k)
    mu.density[k] = kappa[k] * lifting.speed;  // d(theta)/dx
  return mu;
}

IntervalMeasure curvature_measure(const PlanarCurve& curve) {
  return curvature_measure(lift_tangent(curve));
}

}  // namespace curvelab
