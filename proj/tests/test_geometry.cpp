#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "curvelab/geometry.hpp"

using namespace curvelab;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Independent oracle for total turning: accumulate wrapped exterior angles of
// the chord polygon, never touching the lifting machinery.
double chord_turning(const std::vector<Vec2>& pts, bool closed) {
  std::vector<double> ang;
  for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
    Vec2 e = pts[k + 1] - pts[k];
    ang.push_back(std::atan2(e.y, e.x));
  }
  if (closed) ang.push_back(ang.front());
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < ang.size(); ++k)
    total += std::remainder(ang[k + 1] - ang[k], 2.0 * kPi);
  return total;
}

PlanarCurve gerono_eight(std::size_t n) {
  PlanarCurve dense;
  dense.closed = true;
  std::size_t nd = 8192;
  dense.samples.resize(nd);
  for (std::size_t k = 0; k + 1 < nd; ++k) {
    // phase offset keeps the crossing point away from sample vertices
    double t = 0.3 + 2.0 * kPi * double(k) / double(nd - 1);
    dense.samples[k] = {std::sin(t), std::sin(t) * std::cos(t)};
  }
  dense.samples.back() = dense.samples.front();
  dense.domain = polyline_length(dense.samples);
  return resample_arclength(dense, n);
}

PlanarCurve limacon_with_loop(std::size_t n) {
  PlanarCurve dense;
  dense.closed = true;
  std::size_t nd = 8192;
  dense.samples.resize(nd);
  for (std::size_t k = 0; k + 1 < nd; ++k) {
    double t = 2.0 * kPi * double(k) / double(nd - 1);
    double r = 0.5 + std::cos(t);
    dense.samples[k] = {r * std::cos(t), r * std::sin(t)};
  }
  dense.samples.back() = dense.samples.front();
  dense.domain = polyline_length(dense.samples);
  return resample_arclength(dense, n);
}

}  // namespace

TEST_CASE("segment lifting is identically zero") {
  PlanarCurve seg = segment_curve({0, 0}, {3, 0}, 64);
  AngleLifting lift = lift_tangent(seg);
  for (double th : lift.theta) CHECK(std::abs(th) < 1e-14);
  CHECK(lift.basepoint_angle == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("unit circle turns by exactly one revolution") {
  PlanarCurve circ = circle_curve({0, 0}, 1.0, 256);
  AngleLifting lift = lift_tangent(circ);
  CHECK(std::abs(lift.total_turn() - 2.0 * kPi) < 1e-6);
  CHECK(turning_number(lift) == 1);
  CHECK(std::abs(turning_fraction(lift) - 1.0) < 1e-9);
}

TEST_CASE("figure eight has zero total turning, matching the chord oracle") {
  PlanarCurve eight = gerono_eight(2048);
  double oracle = chord_turning(eight.samples, true);
  CHECK(std::abs(oracle) < 1e-9);
  AngleLifting lift = lift_tangent(eight);
  CHECK(std::abs(lift.total_turn()) < 1e-6);
  CHECK(turning_number(lift) == 0);
}

TEST_CASE("limacon with inner loop turns twice") {
  PlanarCurve lim = limacon_with_loop(2048);
  AngleLifting lift = lift_tangent(lim);
  CHECK(turning_number(lift) == 2);
  CHECK(std::abs(turning_fraction(lift) - 2.0) < 1e-3);
}

TEST_CASE("circle curvature is 1/R at machine-level accuracy") {
  double R = 2.5;
  PlanarCurve circ = circle_curve({1, -1}, R, 1024);
  AngleLifting lift = lift_tangent(circ);
  std::vector<double> kappa = curvature_profile(lift);
  for (double k : kappa) CHECK(std::abs(k - 1.0 / R) < 1e-9 / R);
}

TEST_CASE("degenerate segments are rejected") {
  PlanarCurve bad;
  bad.domain = 1.0;
  bad.samples = {{0, 0}, {1, 0}, {1, 0}, {2, 0}};
  CHECK_THROWS_AS(lift_tangent(bad), DegenerateSegmentError);
}

TEST_CASE("full reversal sets the ambiguous-branch flag") {
  PlanarCurve cusp;
  cusp.domain = 2.0;
  cusp.samples = {{0, 0}, {1, 0}, {0, 0}};
  AngleLifting lift = lift_tangent(cusp);
  CHECK(lift.ambiguous_branch);
  CHECK(lift.theta.back() == doctest::Approx(kPi));
}

TEST_CASE("resampling a coarse circle recovers the true length") {
  double R = 1.7;
  PlanarCurve coarse = circle_curve({0, 0}, R, 100);
  PlanarCurve fine = resample_arclength(coarse, 1000);
  CHECK(fine.size() == 1000);
  CHECK(std::abs(fine.domain - 2.0 * kPi * R) < 1e-4 * 2.0 * kPi * R);
  // output is uniform along the interpolant, so chords are uniform too
  double h0 = norm(fine.samples[1] - fine.samples[0]);
  for (std::size_t k = 1; k + 1 < fine.size(); ++k) {
    double hk = norm(fine.samples[k + 1] - fine.samples[k]);
    CHECK(std::abs(hk - h0) < 1e-6 * h0);
  }
}

TEST_CASE("resampling preserves polylines with corners exactly") {
  PlanarCurve ell;
  ell.samples.clear();
  for (int k = 0; k <= 8; ++k) ell.samples.push_back({0.125 * k, 0.0});
  for (int k = 1; k <= 8; ++k) ell.samples.push_back({1.0, 0.125 * k});
  ell.domain = 2.0;
  PlanarCurve out = resample_arclength(ell, 33);
  CHECK(std::abs(out.domain - 2.0) < 1e-12);
  // every output sample must sit on one of the two arms
  for (const Vec2& p : out.samples) {
    double d_arm1 = std::abs(p.y) <= 1e-12 && p.x >= -1e-12 && p.x <= 1 + 1e-12 ? 0.0 : 1.0;
    double d_arm2 = std::abs(p.x - 1.0) <= 1e-12 && p.y >= -1e-12 && p.y <= 1 + 1e-12 ? 0.0 : 1.0;
    CHECK(std::min(d_arm1, d_arm2) == 0.0);
  }
  // the corner itself is hit: s = 1.0 is node 16 of 33
  CHECK(norm(out.samples[16] - Vec2{1.0, 0.0}) < 1e-12);
}

TEST_CASE("lift then synthesize round-trips an ellipse") {
  PlanarCurve ell = ellipse_curve({0, 0}, 2.0, 1.0, 4096);
  AngleLifting lift = lift_tangent(ell);
  PlanarCurve again = synthesize_from_angle(lift, ell.samples.front());
  double diam = 4.0;
  CHECK(hausdorff_distance(ell, again) < 1e-6 * diam);
}

TEST_CASE("constant-speed projection keeps the image and the curvature") {
  PlanarCurve ell = ellipse_curve({0, 0}, 2.0, 1.0, 512);
  PlanarCurve open_arc = ell;
  open_arc.closed = false;  // treat the sampled loop as an open arc
  PlanarCurve cs = to_constant_speed(open_arc, 1.0);
  REQUIRE(cs.size() == open_arc.size());
  for (std::size_t k = 0; k < cs.size(); ++k)
    CHECK(norm(cs.samples[k] - open_arc.samples[k]) == 0.0);
  CHECK(cs.speed == doctest::Approx(open_arc.domain).epsilon(1e-12));
  std::vector<double> ka = curvature_profile(lift_tangent(open_arc));
  std::vector<double> kb = curvature_profile(lift_tangent(cs));
  for (std::size_t k = 0; k < ka.size(); ++k)
    CHECK(std::abs(ka[k] - kb[k]) < 1e-10 * (1.0 + std::abs(ka[k])));
}

TEST_CASE("polyline length is additive and rigid-motion invariant") {
  PlanarCurve lim = limacon_with_loop(257);
  double len = polyline_length(lim.samples);
  std::vector<Vec2> head(lim.samples.begin(), lim.samples.begin() + 100);
  std::vector<Vec2> tail(lim.samples.begin() + 99, lim.samples.end());
  CHECK(std::abs(polyline_length(head) + polyline_length(tail) - len) <
        1e-12 * len);
  PlanarCurve moved = rigid_transform(lim, 0.7, {3.0, -2.0});
  CHECK(std::abs(polyline_length(moved.samples) - len) < 1e-12 * len);
}

TEST_CASE("self-intersection counts: circle, figure eight") {
  CHECK(count_self_intersections(circle_curve({0, 0}, 1.0, 512)) == 0);
  CHECK(count_self_intersections(gerono_eight(2048)) == 1);
}

TEST_CASE("scaling rescales domain and positions together") {
  PlanarCurve circ = circle_curve({0, 0}, 1.0, 128);
  PlanarCurve big = scale_curve(circ, 3.0);
  CHECK(big.domain == doctest::Approx(3.0 * circ.domain));
  CHECK(norm(big.samples[10]) == doctest::Approx(3.0).epsilon(1e-12));
}
