#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "curvelab/detector.hpp"
#include "curvelab/errors.hpp"
#include "curvelab/geometry.hpp"
#include "curvelab/measures.hpp"
#include "curvelab/recovery_closed.hpp"
#include "curvelab/recovery_open.hpp"

namespace {

using namespace curvelab;

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

AtomicIntegerMeasure record(double L,
                            std::vector<std::pair<double, int>> atoms) {
  AtomicIntegerMeasure omega;
  omega.domain = L;
  omega.atoms = std::move(atoms);
  return omega;
}

// Tangent gap rho is crossed when the angle gap reaches this value.
double entry_angle(double rho) { return 2.0 * std::asin(0.5 * rho); }

PlanarCurve reversed(const PlanarCurve& curve) {
  PlanarCurve out = curve;
  std::reverse(out.samples.begin(), out.samples.end());
  return out;
}

// Open curve synthesized from a prescribed tangent angle profile.
PlanarCurve curve_from_angle(const std::vector<double>& theta, double domain) {
  AngleLifting lift;
  lift.domain = domain;
  lift.speed = 1.0;
  lift.closed = false;
  lift.basepoint_angle = theta.front();
  lift.theta = theta;
  return synthesize_from_angle(lift, {0.0, 0.0});
}

double smoothstep(double t) {
  t = std::clamp(t, 0.0, 1.0);
  return t * t * (3.0 - 2.0 * t);
}

}  // namespace

TEST_CASE("matching tangents produce an empty deviation set") {
  const PlanarCurve circle = circle_curve({0.0, 0.0}, 1.0, 2049);
  const DeviationSet same = deviation_intervals(circle, circle, 0.125);
  CHECK(same.intervals.empty());
  CHECK(same.total_length() == 0.0);
  CHECK(same.domain == doctest::Approx(kTwoPi).epsilon(1e-15));

  const PlanarCurve seg = segment_curve({0.0, 0.0}, {1.0, 0.0}, 257);
  CHECK(deviation_intervals(seg, Vec2{1.0, 0.0}, 0.125).intervals.empty());
  // Direction scaling is irrelevant.
  CHECK(deviation_intervals(seg, Vec2{7.0, 0.0}, 0.125).intervals.empty());

  const SingularityExtraction ex = extract_singularities(circle, circle, 0.125);
  CHECK(ex.omega.atoms.empty());
  CHECK_FALSE(ex.low_confidence);
}

TEST_CASE("parameter validation") {
  const PlanarCurve circle = circle_curve({0.0, 0.0}, 1.0, 513);
  const PlanarCurve seg = segment_curve({0.0, 0.0}, {1.0, 0.0}, 257);

  for (const double rho : {0.0, 0.5, -0.1, 0.75})
    CHECK_THROWS_AS(deviation_intervals(seg, Vec2{1.0, 0.0}, rho),
                    ParameterOutOfRangeError);
  CHECK_THROWS_AS(deviation_intervals(seg, Vec2{0.0, 0.0}, 0.125),
                  ParameterOutOfRangeError);

  const PlanarCurve coarse = circle_curve({0.0, 0.0}, 1.0, 257);
  CHECK_THROWS_AS(deviation_intervals(circle, coarse, 0.125),
                  GridMismatchError);
  CHECK_THROWS_AS(deviation_intervals(seg, circle, 0.125), GridMismatchError);
  const PlanarCurve wide = circle_curve({0.0, 0.0}, 2.0, 513);
  CHECK_THROWS_AS(deviation_intervals(circle, wide, 0.125), GridMismatchError);
}

TEST_CASE("full circle against a fixed direction is one wrapped excursion") {
  const double rho = 0.125;
  const double theta_star = entry_angle(rho);
  const PlanarCurve circle = circle_curve({0.0, 0.0}, 1.0, 8193);

  const DeviationSet set = deviation_intervals(circle, Vec2{1.0, 0.0}, rho);
  REQUIRE(set.intervals.size() == 1);
  const DeviationInterval& iv = set.intervals[0];
  CHECK(iv.b > set.domain);  // crosses the seam
  CHECK(iv.winding == 1);
  CHECK(iv.confidence == doctest::Approx(theta_star / kPi).epsilon(1e-4));
  CHECK(set.total_length() ==
        doctest::Approx(kTwoPi - 2.0 * theta_star).epsilon(1e-5));

  // The calm window surrounds the point where the tangent equals the
  // reference direction, so the atom lands diametrically opposite it.
  const SingularityExtraction ex =
      extract_singularities(circle, Vec2{1.0, 0.0}, rho);
  REQUIRE(ex.omega.atoms.size() == 1);
  CHECK(ex.omega.atoms[0].first == doctest::Approx(0.5 * kPi).epsilon(1e-5));
  CHECK(ex.omega.atoms[0].second == 1);
  CHECK_FALSE(ex.low_confidence);

  const SingularityExtraction rex =
      extract_singularities(reversed(circle), Vec2{1.0, 0.0}, rho);
  REQUIRE(rex.omega.atoms.size() == 1);
  CHECK(rex.omega.atoms[0].second == -1);
}

TEST_CASE("one insertion deviates only inside its window") {
  const double rho = 0.125;
  const double theta_star = entry_angle(rho);
  const AtomicIntegerMeasure omega = record(1.0, {{0.5, 1}});
  for (const double eps : {1e-3, 1e-4}) {
    CAPTURE(eps);
    const OpenRecovery rec = build_open_recovery(1.0, omega, eps, 0.375, 8193);
    const KeyBlock& blk = rec.block;
    const double footprint = blk.length() / rec.curve.speed;

    const DeviationSet set =
        deviation_intervals(rec.curve, Vec2{1.0, 0.0}, rho);
    REQUIRE(set.intervals.size() == 1);
    const DeviationInterval& iv = set.intervals[0];
    CHECK(iv.winding == 1);
    CHECK(iv.confidence < 0.05);
    // Centered on the entry position, inside the spliced footprint, and
    // covering the window the block physically occupies on the chord.
    CHECK(0.5 * (iv.a + iv.b) ==
          doctest::Approx(0.5).epsilon(rec.curve.spacing()));
    CHECK(iv.a > 0.5 - 0.6 * footprint);
    CHECK(iv.b < 0.5 + 0.6 * footprint);
    CHECK(iv.a < 0.5 - 0.4 * blk.chord());
    CHECK(iv.b > 0.5 + 0.4 * blk.chord());
    // The tangent re-aligns only over the first and last connector stretch
    // of angular extent theta_star, so the excursion length is the block
    // length minus the two calm tails.
    const double expected =
        (blk.length() - 2.0 * blk.radius * theta_star) / rec.curve.speed;
    CHECK(set.total_length() == doctest::Approx(expected).epsilon(1e-2));
  }
}

TEST_CASE("extraction pins the atom near the prescribed position") {
  const double rho = 0.125;
  const AtomicIntegerMeasure omega = record(1.0, {{0.5, 1}});
  const OpenRecovery rec = build_open_recovery(1.0, omega, 1e-5, 0.375, 8193);
  const SingularityExtraction ex =
      extract_singularities(rec.curve, Vec2{1.0, 0.0}, rho);
  REQUIRE(ex.omega.atoms.size() == 1);
  CHECK(ex.omega.atoms[0].second == 1);
  CHECK(std::abs(ex.omega.atoms[0].first - 0.5) <
        2.0 * rec.block.delta + rec.curve.spacing());
  CHECK_FALSE(ex.low_confidence);

  const PlanarCurve loop = circle_loop_baseline(1.0, 1e-3, 8193);
  const SingularityExtraction lex =
      extract_singularities(loop, Vec2{1.0, 0.0}, rho);
  REQUIRE(lex.omega.atoms.size() == 1);
  CHECK(lex.omega.atoms[0].second == 1);
  CHECK(std::abs(lex.omega.atoms[0].first - 0.5) < 0.1);
  CHECK_FALSE(lex.low_confidence);
}

TEST_CASE("two opposite atoms are classified with signs") {
  const double rho = 0.125;
  const AtomicIntegerMeasure omega = record(1.0, {{0.3, 1}, {0.7, -1}});
  const OpenRecovery rec = build_open_recovery(1.0, omega, 1e-4, 0.375, 8193);
  const SingularityExtraction ex =
      extract_singularities(rec.curve, Vec2{1.0, 0.0}, rho);
  REQUIRE(ex.omega.atoms.size() == 2);
  const double slack = 2.0 * rec.block.delta + rec.curve.spacing();
  CHECK(ex.omega.atoms[0].second == 1);
  CHECK(std::abs(ex.omega.atoms[0].first - 0.3) < slack);
  CHECK(ex.omega.atoms[1].second == -1);
  CHECK(std::abs(ex.omega.atoms[1].first - 0.7) < slack);
  CHECK_FALSE(ex.low_confidence);
  for (const DeviationInterval& iv : ex.deviations.intervals)
    CHECK(iv.confidence < 0.05);
}

TEST_CASE("twin insertions split into unit excursions at every scale") {
  const PlanarCurve reference = circle_curve({0.0, 0.0}, 1.0, 8193);
  const double len = reference.length();
  AtomicIntegerMeasure omega;
  omega.domain = len;
  omega.atoms = {{0.5 * len, 2}};

  // Wide separation: two unit excursions around the twin blocks.
  {
    const ClosedRecovery rc =
        build_closed_recovery(reference, omega, 1e-5, 0.375, 8193);
    const double delta = std::pow(1e-5, 0.375);
    const SingularityExtraction ex =
        extract_singularities(rc.curve, reference, 0.125);
    REQUIRE(ex.omega.atoms.size() == 2);
    CHECK(ex.omega.atoms[0].second == 1);
    CHECK(ex.omega.atoms[1].second == 1);
    CHECK(std::abs(ex.omega.atoms[0].first - (kPi - delta)) < 0.05);
    CHECK(std::abs(ex.omega.atoms[1].first - (kPi + delta)) < 0.05);
    CHECK(ex.omega.total_index() == 2);
    CHECK_FALSE(ex.low_confidence);
  }

  // Coarse scale: even with the twins nearly touching, the relative angle
  // climbs through a full turn transversally somewhere near the junction
  // and re-aligns with the reference there, so the excursion always splits
  // into two unit intervals on a grid that resolves the re-alignment dip.
  {
    const ClosedRecovery rc =
        build_closed_recovery(reference, omega, 1e-3, 0.375, 8193);
    const SingularityExtraction ex =
        extract_singularities(rc.curve, reference, 1.0 / 32.0);
    std::vector<const DeviationInterval*> active;
    for (const DeviationInterval& iv : ex.deviations.intervals)
      if (iv.winding != 0) active.push_back(&iv);
    REQUIRE(active.size() == 2);
    CHECK(active[0]->winding == 1);
    CHECK(active[1]->winding == 1);
    CHECK(active[0]->confidence <= 0.15);
    CHECK(active[1]->confidence <= 0.15);
    CHECK(ex.omega.total_index() == 2);
    CHECK_FALSE(ex.low_confidence);
  }
}

TEST_CASE("an unresolved double twist is flagged, not silently split") {
  // Two full turns compressed into a window a few cells wide.  The relative
  // angle passes a full turn between two adjacent nodes, so the re-alignment
  // dip of the deviation field falls between samples and the excursion shows
  // up as one interval of winding two.  Extraction keeps the atom but raises
  // the flag instead of trusting the unit classification.
  const std::size_t n = 513;
  const double h = kTwoPi / double(n - 1);
  const double width = 0.09;
  const double center = kPi + 0.37 * h;
  std::vector<Vec2> pts(n);
  pts[0] = {1.0, 0.0};
  for (std::size_t j = 0; j + 1 < n; ++j) {
    const double xm = (double(j) + 0.5) * h;
    const double th =
        xm + 0.5 * kPi + 2.0 * kTwoPi * smoothstep((xm - center) / width + 0.5);
    pts[j + 1] = pts[j] + h * Vec2{std::cos(th), std::sin(th)};
  }
  const Vec2 defect = pts[n - 1] - pts[0];
  for (std::size_t j = 0; j < n; ++j)
    pts[j] = pts[j] - (double(j) / double(n - 1)) * defect;
  pts[n - 1] = pts[0];
  PlanarCurve curve;
  curve.param = ParamKind::constant_speed;
  curve.domain = kTwoPi;
  curve.speed = 1.0;
  curve.closed = true;
  curve.samples = std::move(pts);

  const PlanarCurve reference = circle_curve({0.0, 0.0}, 1.0, n);
  const SingularityExtraction ex =
      extract_singularities(curve, reference, 0.125);
  CHECK(ex.low_confidence);
  std::vector<const DeviationInterval*> active;
  for (const DeviationInterval& iv : ex.deviations.intervals)
    if (iv.winding != 0) active.push_back(&iv);
  REQUIRE(active.size() == 1);
  CHECK(active[0]->winding == 2);
  CHECK(active[0]->confidence <= 0.15);
  CHECK(ex.omega.total_index() == 2);
}

TEST_CASE("a partial turn is flagged as low confidence") {
  const std::size_t n = 4097;
  std::vector<double> theta(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double x = double(j) / double(n - 1);
    theta[j] = 1.5 * kPi * smoothstep((x - 0.45) / 0.1);
  }
  const PlanarCurve curve = curve_from_angle(theta, 1.0);
  const SingularityExtraction ex =
      extract_singularities(curve, Vec2{1.0, 0.0}, 0.125);
  CHECK(ex.low_confidence);
  REQUIRE(ex.omega.atoms.size() == 1);
  CHECK(ex.omega.atoms[0].second == 1);
  REQUIRE(ex.deviations.intervals.size() == 1);
  CHECK(ex.deviations.intervals[0].confidence > 0.15);
  CHECK(ex.deviations.intervals[0].b == doctest::Approx(1.0));

  // A there-and-back excursion carries no winding and is not flagged.
  for (std::size_t j = 0; j < n; ++j) {
    const double x = double(j) / double(n - 1);
    theta[j] = 0.5 * kPi * smoothstep((x - 0.45) / 0.05) *
               (1.0 - smoothstep((x - 0.5) / 0.05));
  }
  const PlanarCurve bump = curve_from_angle(theta, 1.0);
  const SingularityExtraction bex =
      extract_singularities(bump, Vec2{1.0, 0.0}, 0.125);
  CHECK_FALSE(bex.low_confidence);
  CHECK(bex.omega.atoms.empty());
  REQUIRE(bex.deviations.intervals.size() == 1);
  CHECK(bex.deviations.intervals[0].winding == 0);
  CHECK(bex.deviations.intervals[0].confidence < 0.05);
}

TEST_CASE("midpoint placement is endpoint-insensitive") {
  const AtomicIntegerMeasure target = record(1.0, {{0.5, 1}});
  const OpenRecovery rec = build_open_recovery(1.0, target, 1e-3, 0.375, 8193);
  const SingularityExtraction ex =
      extract_singularities(rec.curve, Vec2{1.0, 0.0}, 0.125);

  // Each atom carries weight 2*pi times its winding, so moving it by d can
  // move the flat distance by at most 2*pi*|winding|*d; endpoint against
  // midpoint shifts by half the interval length.
  double shift_cost = 0.0;
  AtomicIntegerMeasure left, right;
  left.domain = right.domain = ex.omega.domain;
  for (const DeviationInterval& iv : ex.deviations.intervals) {
    if (iv.winding == 0) continue;
    shift_cost += kTwoPi * std::abs(iv.winding) * (iv.b - iv.a);
    left.atoms.emplace_back(iv.a, iv.winding);
    right.atoms.emplace_back(std::min(iv.b, left.domain), iv.winding);
  }
  FlatNormOptions opt;
  opt.max_density_nodes = 512;
  const IntervalMeasure want = target.to_measure();
  const double f_mid = flat_distance(ex.omega.to_measure(), want, opt);
  const double f_left = flat_distance(left.to_measure(), want, opt);
  const double f_right = flat_distance(right.to_measure(), want, opt);
  CHECK(std::abs(f_left - f_mid) <= 0.5 * shift_cost + 1e-9);
  CHECK(std::abs(f_right - f_mid) <= 0.5 * shift_cost + 1e-9);
  CHECK(std::abs(f_left - f_right) <= shift_cost + 1e-9);
}

TEST_CASE("extracted multiplicities agree across thresholds") {
  const AtomicIntegerMeasure omega = record(1.0, {{0.3, 1}, {0.7, -1}});
  const OpenRecovery rec = build_open_recovery(1.0, omega, 1e-4, 0.375, 8193);
  std::vector<std::pair<double, int>> base;
  for (const double rho : {1.0 / 16.0, 1.0 / 12.0, 1.0 / 8.0}) {
    CAPTURE(rho);
    const SingularityExtraction ex =
        extract_singularities(rec.curve, Vec2{1.0, 0.0}, rho);
    REQUIRE(ex.omega.atoms.size() == 2);
    if (base.empty()) {
      base = ex.omega.atoms;
      continue;
    }
    for (std::size_t j = 0; j < base.size(); ++j) {
      CHECK(ex.omega.atoms[j].second == base[j].second);
      CHECK(std::abs(ex.omega.atoms[j].first - base[j].first) < 0.02);
    }
  }
}

TEST_CASE("open sweep satisfies the compactness bounds") {
  const double rho = 0.125;
  const double theta_star = entry_angle(rho);
  const AtomicIntegerMeasure target = record(1.0, {{0.5, 1}});
  const CurveBuilder builder = [&target](double eps) {
    return build_open_recovery(1.0, target, eps, 0.375, 8193).curve;
  };
  const std::vector<double> eps_list = {1e-2, 1e-3, 1e-4, 1e-5};

  const SweepDiagnostics diag = sweep_diagnostics(
      builder, eps_list, Vec2{1.0, 0.0}, rho, target, 11.85);
  CHECK(diag.c_bound == doctest::Approx(23.7));
  CHECK(diag.measure_bound_ok);
  CHECK(diag.curvature_bound_ok);
  CHECK(diag.flats_decreasing);
  CHECK(diag.stable_from == doctest::Approx(1e-2));
  REQUIRE(diag.rows.size() == 4);
  for (std::size_t i = 0; i < diag.rows.size(); ++i) {
    const SweepRow& row = diag.rows[i];
    CHECK(row.epsilon == doctest::Approx(eps_list[i]));
    CHECK(row.interval_count == 1);
    const KeyBlock blk = build_key_block(row.epsilon, 0.375, +1, 33);
    CHECK(row.deviation_length ==
          doctest::Approx(blk.length() - 2.0 * blk.radius * theta_star)
              .epsilon(2e-2));
    CHECK(row.curvature_mass ==
          doctest::Approx(kTwoPi - 2.0 * theta_star).epsilon(2e-2));
  }
  CHECK(diag.rows.back().flat_target <= 0.2);
  // The symmetric single-atom extraction lands exactly on the target, so the
  // strict-decrease witness is the excess-curvature column.
  CHECK(diag.rows.back().flat_extracted < diag.rows.front().flat_extracted);
}

TEST_CASE("constant builder yields an all-zero table") {
  const PlanarCurve seg = segment_curve({0.0, 0.0}, {1.0, 0.0}, 257);
  const CurveBuilder builder = [&seg](double) { return seg; };
  const AtomicIntegerMeasure empty = record(1.0, {});
  const SweepDiagnostics diag = sweep_diagnostics(
      builder, {1e-2, 1e-3}, Vec2{1.0, 0.0}, 0.125, empty, 1.0);
  CHECK(diag.measure_bound_ok);
  CHECK(diag.curvature_bound_ok);
  CHECK(diag.flats_decreasing);
  CHECK(diag.stable_from == doctest::Approx(1e-2));
  for (const SweepRow& row : diag.rows) {
    CHECK(row.deviation_length == 0.0);
    CHECK(row.curvature_mass == 0.0);
    CHECK(row.interval_count == 0);
    CHECK(row.flat_extracted == 0.0);
    CHECK(row.flat_target == 0.0);
  }
}

TEST_CASE("closed sweep converges to the prescribed record") {
  const PlanarCurve reference = circle_curve({0.0, 0.0}, 1.0, 8193);
  const double len = reference.length();
  AtomicIntegerMeasure target;
  target.domain = len;
  target.atoms = {{0.5 * len, 1}};
  const CurveBuilder builder = [&](double eps) {
    return build_closed_recovery(reference, target, eps, 0.375, 8193).curve;
  };

  const SweepDiagnostics diag = sweep_diagnostics(
      builder, {1e-3, 1e-4, 1e-5}, reference, 0.125, target, 13.0);
  CHECK(diag.measure_bound_ok);
  CHECK(diag.curvature_bound_ok);
  CHECK(diag.flats_decreasing);
  CHECK(diag.stable_from == doctest::Approx(1e-3));
  REQUIRE(diag.rows.size() == 3);
  for (const SweepRow& row : diag.rows) CHECK(row.interval_count == 1);
  CHECK(diag.rows.back().flat_target <= 0.2);
}

TEST_CASE("sweep validation") {
  const PlanarCurve seg = segment_curve({0.0, 0.0}, {1.0, 0.0}, 257);
  const CurveBuilder builder = [&seg](double) { return seg; };
  const AtomicIntegerMeasure empty = record(1.0, {});
  const Vec2 v{1.0, 0.0};
  CHECK_THROWS_AS(sweep_diagnostics(builder, {}, v, 0.125, empty, 1.0),
                  ParameterOutOfRangeError);
  CHECK_THROWS_AS(
      sweep_diagnostics(builder, {1e-2, 1e-2}, v, 0.125, empty, 1.0),
      ParameterOutOfRangeError);
  CHECK_THROWS_AS(
      sweep_diagnostics(builder, {1e-3, 1e-2}, v, 0.125, empty, 1.0),
      ParameterOutOfRangeError);
  CHECK_THROWS_AS(
      sweep_diagnostics(builder, {1e-2, 0.0}, v, 0.125, empty, 1.0),
      ParameterOutOfRangeError);
  CHECK_THROWS_AS(
      sweep_diagnostics(builder, {1e-2, 1e-3}, v, 0.125, empty, 0.0),
      ParameterOutOfRangeError);

  // Builder output must stay on the reference grid in same-grid mode.
  const PlanarCurve reference = circle_curve({0.0, 0.0}, 1.0, 8193);
  const CurveBuilder coarse = [](double) {
    return circle_curve({0.0, 0.0}, 1.0, 4097);
  };
  AtomicIntegerMeasure target;
  target.domain = reference.length();
  CHECK_THROWS_AS(
      sweep_diagnostics(coarse, {1e-3}, reference, 0.125, target, 1.0),
      GridMismatchError);
}
