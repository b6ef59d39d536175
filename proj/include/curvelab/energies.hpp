#pragma once

// Scaled excess energies of nearly-straight open arcs and nearly-rigid closed
// loops, their phase-field reformulation on the tangent angle, the transition
// cost transform with its periodic defect, and the concentration limit.

#include <cstddef>
#include <optional>
#include <vector>

#include "curvelab/geometry.hpp"
#include "curvelab/measures.hpp"

namespace curvelab {

// Cost per full turn concentrated at a point: 8 * sqrt(2), also the integral
// of 2*sqrt(1 - cos t) over one period.
inline constexpr double kSigma = 11.313708498984760390413509793678;

// Quadrature recomputation of kSigma for self-checking.
double sigma_quadrature(std::size_t panels = 8);

// Contributions of a single recovery block: the connector arcs' excess over
// their chord projection, the core transition cost, and the connector arcs'
// bending.  Core tends to kSigma, the other two vanish.
struct BlockTerms {
  double arc_excess = 0.0;
  double core_transition = 0.0;
  double arc_bending = 0.0;

  double total() const { return arc_excess + core_transition + arc_bending; }
};

struct EnergyReport {
  double epsilon = 0.0;
  double curvature_term = 0.0;   // sqrt(eps) * integral of kappa^2
  double excess_term = 0.0;      // length excess (open) or tangent misfit (closed)
  double total = 0.0;            // curvature_term + excess_term
  double mm_total = 0.0;         // phase-field form recomputation
  double mm_lower_bound = 0.0;   // total variation of the transform composed
                                 // with the (relative) angle
  std::optional<BlockTerms> block_terms;
};

// Running cost of sweeping the tangent through an angle: the antiderivative
// of 2*sqrt(1 - cos), odd and strictly increasing, gaining kSigma per turn.
double transition_cost(double theta);
// Periodic defect g(theta) = (2*pi/kSigma) * transition_cost(theta) - theta;
// vanishes at full turns.
double transition_defect(double theta);

// Trapezoid quadrature of kappa^2 in arclength.
double bending_energy(const PlanarCurve& curve);

// Scaled excess energy of an open curve clamped at p and q with horizontal
// end tangents: sqrt(eps) * bending + (length - |p - q|) / sqrt(eps).
// Throws AdmissibilityError when the clamping or the closure integrals are
// violated beyond the documented tolerances.
EnergyReport open_excess_energy(const PlanarCurve& curve, Vec2 p, Vec2 q,
                                double epsilon);

// Scaled excess energy of a closed curve against a reference of equal length
// on the same grid: sqrt(eps) * bending + mean-square tangent misfit scaled
// by 1 / (2 sqrt(eps)); the phase-field route rewrites the misfit through
// the cosine of the angle difference.
EnergyReport closed_excess_energy(const PlanarCurve& curve_eps,
                                  const PlanarCurve& reference, double epsilon);

// Concentration limit: count of full turns and its kSigma-scaled cost.
struct LimitEnergy {
  int index = 0;      // sum of |winding| over atoms
  double scaled = 0.0;  // kSigma * index
};
LimitEnergy limit_energy(const AtomicIntegerMeasure& omega);

// Discrete total variation of the transition cost along the lifting (or of
// the lifting difference when a reference is supplied): the lower-bound side
// of the compactness chain.
double mm_lower_bound(const AngleLifting& lifting,
                      const AngleLifting* reference = nullptr);

// Certified discrete form of the defect bound: the distributional difference
// between the normalized transition-cost increments and the angle increments
// has flat norm at most the weighted l1 size of the defect along the
// lifting.  Telescoping makes the discrete inequality exact, so `flat` may
// exceed `defect_l1` only by solver roundoff.
struct DefectAudit {
  double flat = 0.0;
  double defect_l1 = 0.0;
};
DefectAudit flat_defect_audit(const AngleLifting& lifting,
                              std::size_t max_nodes = 513);

}  // namespace curvelab
