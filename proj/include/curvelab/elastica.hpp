#pragma once

// Closed-form borderline profile: the arclength curve whose tangent sweeps a
// single full turn while staying stationary for the penalized length, plus a
// discrete stationarity residual for verifying candidates.

#include <cstddef>

#include "curvelab/geometry.hpp"

namespace curvelab {

struct BorderlineSample {
  double s = 0.0;          // arclength from the apex
  Vec2 point;              // (s - 2*sqrt(2 eps) tanh u, 2*sqrt(2 eps) sech u)
  double angle = 0.0;      // 4 * arctan(exp(u)), u = s / sqrt(2 eps)
  double curvature = 0.0;  // sqrt(2 / eps) * sech u, positive everywhere
  double epsilon = 0.0;
};

// All fields evaluated in overflow-safe closed form; epsilon in (0, 1].
BorderlineSample borderline_sample(double epsilon, double s);

// Uniform arclength sampling of the profile over [s_lo, s_hi].
PlanarCurve borderline_curve(double epsilon, double s_lo, double s_hi,
                             std::size_t n);

// Discrete residual of -kappa + eps * (2 kappa'' + kappa^3) over the interior
// nodes; max and (arclength-weighted) L2 norms.
struct StationarityResidual {
  double max_abs = 0.0;
  double l2 = 0.0;
};
StationarityResidual el_residual(const PlanarCurve& curve, double epsilon);

}  // namespace curvelab
