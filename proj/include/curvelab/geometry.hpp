#pragma once

// Discrete planar curves on uniform parameter grids, tangent-angle liftings
// with branch-consistent unwrapping, curvature profiles, and arclength
// resampling through a corner-aware piecewise-cubic interpolant.

#include <cmath>
#include <cstddef>
#include <vector>

#include "curvelab/errors.hpp"

namespace curvelab {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double a) const { return {a * x, a * y}; }
  Vec2 operator-() const { return {-x, -y}; }
};

inline Vec2 operator*(double a, Vec2 v) { return v * a; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

enum class ParamKind { arclength, constant_speed };

// Samples live on the uniform grid x_k = k * domain / (n - 1).  For closed
// curves the seam node is duplicated: samples.front() == samples.back() and
// the n - 1 edges cover the full loop.  `speed` is |dP/dx|: 1 for arclength
// parametrization, len/L for a constant-speed curve on [0, L].
struct PlanarCurve {
  ParamKind param = ParamKind::arclength;
  double domain = 0.0;
  double speed = 1.0;
  bool closed = false;
  std::vector<Vec2> samples;

  std::size_t size() const { return samples.size(); }
  double spacing() const {
    return samples.size() > 1 ? domain / double(samples.size() - 1) : 0.0;
  }
  // Geometric length implied by the parametrization.
  double length() const { return domain * speed; }
};

// Continuous tangent-angle field theta on the same grid as the source curve.
// Increments between nodes are chosen in (-pi, pi]; an increment that sits on
// the branch cut (exactly a half turn) is taken as +pi and flagged.
struct AngleLifting {
  double domain = 0.0;
  double speed = 1.0;
  bool closed = false;
  double basepoint_angle = 0.0;
  bool ambiguous_branch = false;
  std::vector<double> theta;

  std::size_t size() const { return theta.size(); }
  double spacing() const {
    return theta.size() > 1 ? domain / double(theta.size() - 1) : 0.0;
  }
  double total_turn() const { return theta.back() - theta.front(); }
};

// Structural checks shared by every consumer: sample count, distinct
// consecutive samples, duplicated seam for closed curves.
void validate_curve(const PlanarCurve& curve);

AngleLifting lift_tangent(const PlanarCurve& curve);

// Signed curvature d(theta)/ds at every node (second-order differences,
// wrapped for closed liftings, one-sided at open ends).
std::vector<double> curvature_profile(const AngleLifting& lifting);

// Integrate the unit tangent field: dP/dx = speed * (cos theta, sin theta),
// trapezoid rule from `base`.
PlanarCurve synthesize_from_angle(const AngleLifting& lifting, Vec2 base);

// total_turn / 2pi, and its nearest integer (|residual| <= 1e-3 enforced by
// callers that need quantization, not here).
double turning_fraction(const AngleLifting& lifting);
int turning_number(const AngleLifting& lifting);

// Resample to n uniformly spaced arclength nodes.  Positions come from a
// local cubic (Catmull-Rom tangents) whose segments adjacent to a corner
// vertex fall back to one-sided chords, so genuinely straight runs and
// polygon corners are reproduced exactly while smooth curves gain two orders
// over chordal interpolation.
PlanarCurve resample_arclength(const PlanarCurve& curve, std::size_t n);

// Reparametrize an open arclength curve to constant speed on [0, L].  The
// geometric image is untouched; only the grid metadata changes.
PlanarCurve to_constant_speed(const PlanarCurve& curve, double L);

double polyline_length(const std::vector<Vec2>& samples);

PlanarCurve rigid_transform(const PlanarCurve& curve, double angle, Vec2 shift);
PlanarCurve scale_curve(const PlanarCurve& curve, double factor);

// Count transversal self-crossings of the sample polyline (non-adjacent
// segment pairs, uniform-grid broad phase).
std::size_t count_self_intersections(const PlanarCurve& curve);

// Symmetric Hausdorff distance between two sample polylines.
double hausdorff_distance(const PlanarCurve& a, const PlanarCurve& b);

// Canonical shapes used across experiments and tests.
PlanarCurve segment_curve(Vec2 p, Vec2 q, std::size_t n);
PlanarCurve circle_curve(Vec2 center, double radius, std::size_t n);
PlanarCurve ellipse_curve(Vec2 center, double a, double b, std::size_t n);

}  // namespace curvelab
