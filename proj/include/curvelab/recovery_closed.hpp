#pragma once

// Closed-curve analogue of the open recovery: each unit of winding splices a
// rotated block into the base curve, a straight segment inserted where the
// tangent points the opposite way cancels the block's endpoint displacement,
// and a final homothety restores the original length.

#include <cstddef>
#include <vector>

#include "curvelab/geometry.hpp"
#include "curvelab/measures.hpp"

namespace curvelab {

// All arclength positions in [0, len) where the unit tangent opposes the one
// at s1.  Brackets come from the node lifting; each root is polished on the
// smooth interpolant.  Requires a closed curve of turning number one.
std::vector<double> opposite_tangent_solutions(const PlanarCurve& gamma, double s1);

// Canonical solution: the one nearest s1 + len/2 on the periodic parameter.
double find_opposite_tangent(const PlanarCurve& gamma, double s1);

struct ClosedInsertion {
  double anchor = 0.0;       // base arclength of the splice point
  int sign = 0;              // +1 or -1 for a block, 0 for a straight segment
  double start = 0.0;        // start of the inserted run, output arclength
  double length = 0.0;       // inserted arclength on the output curve
  double tangent_gap = 0.0;  // angle defect at the splice, radians
};

struct InsertionReport {
  double epsilon = 0.0;
  double a = 0.0;
  double lambda = 1.0;  // base length over inflated length
  std::vector<ClosedInsertion> insertions;  // in increasing anchor order
  double max_junction_gap = 0.0;
};

struct ClosedRecovery {
  PlanarCurve curve;  // closed, arclength, same nominal length as the base
  InsertionReport report;
};

// Splices one block per unit winding at each recorded position plus one
// drift-cancelling segment per block, then rescales about the origin so the
// output length equals the base length.  The base may carry its atoms
// anywhere on the periodic parameter; insertion windows of half-width delta
// around every splice point must stay pairwise disjoint.
ClosedRecovery build_closed_recovery(const PlanarCurve& gamma,
                                     const AtomicIntegerMeasure& omega,
                                     double epsilon, double a = 0.375,
                                     std::size_t n = 32769);

}  // namespace curvelab
