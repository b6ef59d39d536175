#include "curvelab/detector.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "curvelab/errors.hpp"

namespace curvelab {

namespace {

constexpr double kTwoPi = 6.28318530717958647692;

// Node data shared by both comparison modes.  `dev` is the Euclidean gap
// between unit tangents, `lift` the continuous field whose increment across
// an excursion gives its swept winding (tangent lifting in direction mode,
// lifting difference in same-grid mode).  Closed arrays keep the duplicated
// seam node, so lift.back() - lift.front() is the per-period drift.
struct DeviationField {
  double domain = 0.0;
  double h = 0.0;
  double speed = 1.0;
  bool closed = false;
  std::vector<double> dev;
  std::vector<double> lift;
  std::vector<double> abs_kappa;
};

void check_rho(double rho) {
  if (!(rho > 0.0) || !(rho < 0.5))
    throw ParameterOutOfRangeError(
        "deviation threshold must lie in (0, 1/2)");
}

DeviationField field_against_direction(const PlanarCurve& curve, Vec2 v,
                                       double rho) {
  check_rho(rho);
  if (!(norm(v) > 0.0))
    throw ParameterOutOfRangeError("reference direction must be nonzero");
  const AngleLifting lift = lift_tangent(curve);
  const double theta_v = std::atan2(v.y, v.x);

  DeviationField f;
  f.domain = curve.domain;
  f.h = curve.spacing();
  f.speed = curve.speed;
  f.closed = curve.closed;
  f.lift = lift.theta;
  f.dev.resize(lift.theta.size());
  for (std::size_t j = 0; j < lift.theta.size(); ++j)
    f.dev[j] = 2.0 * std::abs(std::sin(0.5 * (lift.theta[j] - theta_v)));
  f.abs_kappa = curvature_profile(lift);
  for (double& k : f.abs_kappa) k = std::abs(k);
  return f;
}

DeviationField field_against_curve(const PlanarCurve& curve,
                                   const PlanarCurve& reference, double rho) {
  check_rho(rho);
  if (!curve.closed || !reference.closed)
    throw GridMismatchError("same-grid comparison needs closed curves");
  if (curve.size() != reference.size())
    throw GridMismatchError("reference grid node count differs");
  const double scale = std::max({curve.domain, reference.domain, 1.0});
  if (std::abs(curve.domain - reference.domain) > 1e-9 * scale)
    throw GridMismatchError("reference grid domain differs");

  const AngleLifting lift_eps = lift_tangent(curve);
  const AngleLifting lift_ref = lift_tangent(reference);

  DeviationField f;
  f.domain = curve.domain;
  f.h = curve.spacing();
  f.speed = curve.speed;
  f.closed = true;
  f.lift.resize(lift_eps.theta.size());
  f.dev.resize(lift_eps.theta.size());
  for (std::size_t j = 0; j < f.lift.size(); ++j) {
    f.lift[j] = lift_eps.theta[j] - lift_ref.theta[j];
    f.dev[j] = 2.0 * std::abs(std::sin(0.5 * f.lift[j]));
  }
  f.abs_kappa = curvature_profile(lift_eps);
  for (double& k : f.abs_kappa) k = std::abs(k);
  return f;
}

// Threshold crossing between adjacent nodes, one of which deviates.
double crossing(const DeviationField& f, double d0, double d1,
                std::size_t jlo, double rho) {
  const double t = (rho - d0) / (d1 - d0);
  return f.h * (double(jlo) + t);
}

double lift_open_at(const DeviationField& f, double x) {
  const double u = std::clamp(x / f.h, 0.0, double(f.lift.size() - 1));
  const std::size_t j = std::min(std::size_t(u), f.lift.size() - 2);
  const double t = u - double(j);
  return f.lift[j] * (1.0 - t) + f.lift[j + 1] * t;
}

void classify(DeviationInterval& iv) {
  const double w = iv.raw_turn / kTwoPi;
  iv.winding = int(std::lround(w));
  iv.confidence = std::abs(w - double(iv.winding));
}

std::vector<DeviationInterval> find_intervals(const DeviationField& f,
                                              double rho) {
  const std::size_t n = f.dev.size();
  std::vector<DeviationInterval> out;

  if (!f.closed) {
    std::size_t j = 0;
    while (j < n) {
      if (!(f.dev[j] > rho)) {
        ++j;
        continue;
      }
      const std::size_t j0 = j;
      while (j < n && f.dev[j] > rho) ++j;
      const std::size_t j1 = j - 1;
      DeviationInterval iv;
      iv.a = j0 == 0 ? 0.0 : crossing(f, f.dev[j0 - 1], f.dev[j0], j0 - 1, rho);
      iv.b = j1 + 1 == n ? f.domain
                         : crossing(f, f.dev[j1], f.dev[j1 + 1], j1, rho);
      iv.raw_turn = lift_open_at(f, iv.b) - lift_open_at(f, iv.a);
      classify(iv);
      out.push_back(iv);
    }
    return out;
  }

  const std::size_t N = n - 1;
  const double period = f.lift[N] - f.lift[0];
  std::size_t q = N;
  for (std::size_t j = 0; j < N; ++j)
    if (!(f.dev[j] > rho)) {
      q = j;
      break;
    }
  if (q == N) {
    // The tangent never re-enters the rho-ball: the whole loop is one
    // excursion and its winding is the per-period drift.
    DeviationInterval iv;
    iv.a = 0.0;
    iv.b = f.domain;
    iv.raw_turn = period;
    classify(iv);
    out.push_back(iv);
    return out;
  }

  const auto dev_at = [&](std::size_t t) { return f.dev[t % N]; };
  const auto lift_node = [&](std::size_t t) {
    return f.lift[t % N] + double(t / N) * period;
  };
  const auto lift_at = [&](double x) {
    const double u = x / f.h;
    const std::size_t j = std::size_t(u);
    const double t = u - double(j);
    return lift_node(j) * (1.0 - t) + lift_node(j + 1) * t;
  };

  // Scan one full period starting from the calm node q; both scan ends are
  // calm, so every run closes inside the window and the seam needs no
  // special casing.
  const std::size_t tend = q + N;
  std::size_t t = q + 1;
  while (t < tend) {
    if (!(dev_at(t) > rho)) {
      ++t;
      continue;
    }
    const std::size_t t0 = t;
    while (t <= tend && dev_at(t) > rho) ++t;
    const std::size_t t1 = t - 1;
    const double au = crossing(f, dev_at(t0 - 1), dev_at(t0), t0 - 1, rho);
    const double bu = crossing(f, dev_at(t1), dev_at(t1 + 1), t1, rho);
    DeviationInterval iv;
    const double aw = au < f.domain ? au : au - f.domain;
    iv.a = aw;
    iv.b = aw + (bu - au);
    iv.raw_turn = lift_at(bu) - lift_at(au);
    classify(iv);
    out.push_back(iv);
  }
  std::sort(out.begin(), out.end(),
            [](const DeviationInterval& x, const DeviationInterval& y) {
              return x.a < y.a;
            });
  return out;
}

DeviationSet make_set(const DeviationField& f, double rho) {
  DeviationSet set;
  set.rho = rho;
  set.domain = f.domain;
  set.intervals = find_intervals(f, rho);
  return set;
}

SingularityExtraction extract_from_set(DeviationSet set, bool same_grid) {
  SingularityExtraction out;
  out.omega.domain = set.domain;
  for (const DeviationInterval& iv : set.intervals) {
    if (iv.confidence > 0.15)
      out.low_confidence = true;
    else if (same_grid && std::abs(iv.winding) > 1)
      out.low_confidence = true;
    if (iv.winding != 0) {
      double mid = 0.5 * (iv.a + iv.b);
      if (mid >= set.domain) mid -= set.domain;
      out.omega.atoms.emplace_back(mid, iv.winding);
    }
  }
  std::sort(out.omega.atoms.begin(), out.omega.atoms.end());
  out.deviations = std::move(set);
  return out;
}

// Integral of |kappa| ds over the deviation set, trapezoids on clipped grid
// cells with periodic wrap for seam-crossing intervals.
double set_curvature_mass(const DeviationField& f, const DeviationSet& set) {
  const std::size_t last = f.abs_kappa.size() - 2;
  const auto value = [&](double x) {
    if (f.closed && x >= f.domain) x -= f.domain;
    const double u = std::clamp(x / f.h, 0.0, double(last + 1));
    const std::size_t j = std::min(std::size_t(u), last);
    const double t = u - double(j);
    return f.abs_kappa[j] * (1.0 - t) + f.abs_kappa[j + 1] * t;
  };
  double mass = 0.0;
  for (const DeviationInterval& iv : set.intervals) {
    const auto j0 = std::ptrdiff_t(std::floor(iv.a / f.h));
    const auto j1 = std::ptrdiff_t(std::floor((iv.b - 1e-12 * f.h) / f.h));
    for (std::ptrdiff_t j = j0; j <= j1; ++j) {
      const double x0 = std::max(iv.a, f.h * double(j));
      const double x1 = std::min(iv.b, f.h * double(j + 1));
      if (x1 <= x0) continue;
      mass += 0.5 * (value(x0) + value(x1)) * (x1 - x0);
    }
  }
  return mass * f.speed;
}

SweepDiagnostics sweep_impl(
    const CurveBuilder& builder, const std::vector<double>& eps_list,
    const std::function<DeviationField(const PlanarCurve&)>& make_field,
    const std::function<IntervalMeasure(const PlanarCurve&)>& excess_measure,
    bool same_grid, FlatMode mode, double rho,
    const AtomicIntegerMeasure& target, double energy_bound) {
  if (eps_list.empty())
    throw ParameterOutOfRangeError("epsilon list is empty");
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    if (!(eps_list[i] > 0.0))
      throw ParameterOutOfRangeError("epsilon values must be positive");
    if (i > 0 && !(eps_list[i] < eps_list[i - 1]))
      throw ParameterOutOfRangeError("epsilon list must decrease strictly");
  }
  if (!(energy_bound > 0.0))
    throw ParameterOutOfRangeError("energy bound must be positive");

  SweepDiagnostics diag;
  diag.rho = rho;
  diag.c_bound = 2.0 * energy_bound;
  diag.measure_bound_ok = true;
  diag.curvature_bound_ok = true;
  diag.flats_decreasing = true;

  FlatNormOptions opt;
  opt.mode = mode;
  opt.max_density_nodes = 512;
  const IntervalMeasure target_measure = target.to_measure();
  std::vector<int> total_indices;

  for (const double eps : eps_list) {
    const PlanarCurve curve = builder(eps);
    const DeviationField field = make_field(curve);
    const DeviationSet set = make_set(field, rho);
    const SingularityExtraction ex = extract_from_set(set, same_grid);

    SweepRow row;
    row.epsilon = eps;
    row.deviation_length = set.total_length() * curve.speed;
    row.curvature_mass = set_curvature_mass(field, set);
    for (const DeviationInterval& iv : set.intervals)
      if (iv.winding != 0) ++row.interval_count;
    const IntervalMeasure extracted = ex.omega.to_measure();
    row.flat_extracted = flat_distance(excess_measure(curve), extracted, opt);
    row.flat_target = flat_distance(extracted, target_measure, opt);

    if (row.deviation_length * rho * rho >
        diag.c_bound * std::sqrt(eps) + 1e-12)
      diag.measure_bound_ok = false;
    if (row.curvature_mass > diag.c_bound / rho + 1e-12)
      diag.curvature_bound_ok = false;
    if (!diag.rows.empty()) {
      const SweepRow& prev = diag.rows.back();
      const double slack = 1e-9 * std::max(1.0, prev.flat_extracted);
      if (row.flat_extracted > prev.flat_extracted + slack ||
          row.flat_target > prev.flat_target + slack)
        diag.flats_decreasing = false;
    }
    total_indices.push_back(ex.omega.total_index());
    diag.rows.push_back(row);
  }

  // Counted with multiplicity, so a merged excursion of winding m and m
  // separate unit excursions both register as settled.
  diag.stable_from = std::nan("");
  const int want = target.total_index();
  for (std::size_t i = diag.rows.size(); i-- > 0;) {
    if (total_indices[i] != want) break;
    diag.stable_from = diag.rows[i].epsilon;
  }
  return diag;
}

}  // namespace

double DeviationSet::total_length() const {
  double total = 0.0;
  for (const DeviationInterval& iv : intervals) total += iv.b - iv.a;
  return total;
}

DeviationSet deviation_intervals(const PlanarCurve& curve_eps, Vec2 direction,
                                 double rho) {
  return make_set(field_against_direction(curve_eps, direction, rho), rho);
}

DeviationSet deviation_intervals(const PlanarCurve& curve_eps,
                                 const PlanarCurve& reference, double rho) {
  return make_set(field_against_curve(curve_eps, reference, rho), rho);
}

SingularityExtraction extract_singularities(const PlanarCurve& curve_eps,
                                            Vec2 direction, double rho) {
  return extract_from_set(
      make_set(field_against_direction(curve_eps, direction, rho), rho),
      false);
}

SingularityExtraction extract_singularities(const PlanarCurve& curve_eps,
                                            const PlanarCurve& reference,
                                            double rho) {
  return extract_from_set(
      make_set(field_against_curve(curve_eps, reference, rho), rho), true);
}

SweepDiagnostics sweep_diagnostics(const CurveBuilder& builder,
                                   const std::vector<double>& eps_list,
                                   Vec2 direction, double rho,
                                   const AtomicIntegerMeasure& target,
                                   double energy_bound) {
  return sweep_impl(
      builder, eps_list,
      [direction, rho](const PlanarCurve& c) {
        return field_against_direction(c, direction, rho);
      },
      [](const PlanarCurve& c) { return curvature_measure(c); },
      /*same_grid=*/false, FlatMode::open_interval, rho, target, energy_bound);
}

SweepDiagnostics sweep_diagnostics(const CurveBuilder& builder,
                                   const std::vector<double>& eps_list,
                                   const PlanarCurve& reference, double rho,
                                   const AtomicIntegerMeasure& target,
                                   double energy_bound) {
  const IntervalMeasure ref_measure = curvature_measure(reference);
  return sweep_impl(
      builder, eps_list,
      [&reference, rho](const PlanarCurve& c) {
        return field_against_curve(c, reference, rho);
      },
      [&ref_measure](const PlanarCurve& c) {
        return subtract(curvature_measure(c), ref_measure);
      },
      /*same_grid=*/true, FlatMode::periodic, rho, target, energy_bound);
}

}  // namespace curvelab
