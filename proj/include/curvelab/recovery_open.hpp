#pragma once

// Single-turn insertion blocks (borderline core flanked by two circular
// connector arcs), their exact energy split, and open assemblies that realize
// a prescribed concentration record along a straight chord, together with the
// suboptimal circular-loop baseline.

#include <cstddef>
#include <utility>
#include <vector>

#include "curvelab/energies.hpp"
#include "curvelab/geometry.hpp"
#include "curvelab/measures.hpp"

namespace curvelab {

// One full-turn block at scale epsilon.  The tangent angle climbs 0 -> 2*pi
// (sign -1 mirrors across the x-axis), both endpoints sit on the x-axis with
// horizontal tangents, and curvature is continuous at the inner junctions
// because the connector radius equals the core radius at +-delta.
struct KeyBlock {
  double epsilon = 0.0;
  double a = 0.0;           // core half-width exponent, delta = epsilon^a
  double delta = 0.0;
  int sign = 1;
  double radius = 0.0;      // connector radius, 1 / |curvature at +-delta|
  double arc_angle = 0.0;   // angle swept by each connector arc
  double arc_length = 0.0;  // radius * arc_angle
  Vec2 p;                   // (0, 0)
  Vec2 q;                   // (chord, 0)
  PlanarCurve samples;      // arclength grid over 2*delta + 2*arc_length
  BlockTerms energy_terms;

  double chord() const { return q.x - p.x; }
  double length() const { return 2.0 * delta + 2.0 * arc_length; }
};

// epsilon in (0, 1], a in (1/4, 1/2) strictly, sign +-1, n >= 9.
KeyBlock build_key_block(double epsilon, double a, int sign,
                         std::size_t n = 16385);

// Closed-form energy split; agrees with open_excess_energy of the samples to
// discretization accuracy (1e-4 relative at the default resolution).
BlockTerms key_block_energy(const KeyBlock& block);

// Straight chord from (0,0) to (L,0) with key blocks spliced in over disjoint
// windows; realizes the record omega in the concentration limit.  The curve
// uses the constant-speed grid on [0, L], so its curvature measure and omega
// live on the same interval.
struct OpenRecovery {
  PlanarCurve curve;
  KeyBlock block;               // prototype (sign +1) shared by every window
  std::vector<double> centers;  // window centers, sorted increasingly
  std::vector<int> signs;       // orientation per window
  std::vector<std::pair<double, double>> windows;  // x-extents, width = chord
  double window_slack = 0.0;    // 2*delta - chord: parameter width minus
                                // footprint, absorbed by the flanking pieces
};

// omega.domain must equal L; a record entry of winding c inserts |c| blocks
// with centers spaced exactly 2*delta around the entry position.  Throws
// BlocksDoNotFitError when windows would overlap or leave (0, L).
OpenRecovery build_open_recovery(double L, const AtomicIntegerMeasure& omega,
                                 double epsilon, double a,
                                 std::size_t n = 16385);

// Straight chord with a circle of radius sqrt(epsilon) attached tangentially
// at the midpoint and traversed once: scaled excess energy 4*pi at every
// epsilon, strictly above a single block.  Requires epsilon < (L/10)^2.
PlanarCurve circle_loop_baseline(double L, double epsilon,
                                 std::size_t n = 32769);

}  // namespace curvelab
