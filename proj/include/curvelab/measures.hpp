#pragma once

// Finite signed measures on a parameter interval [0, D]: an absolutely
// continuous part sampled on the uniform grid plus exact-position atoms.
// The flat norm (test functions with sup-norm + Lipschitz seminorm <= 1,
// optionally periodic) is evaluated as an exact LP over the union of grid
// nodes and atom positions; an independent certified bracket is available
// through a parametric transport solver.

#include <cstddef>
#include <utility>
#include <vector>

#include "curvelab/errors.hpp"
#include "curvelab/geometry.hpp"

namespace curvelab {

struct Atom {
  double position = 0.0;
  double weight = 0.0;
};

struct IntervalMeasure {
  double domain = 0.0;
  std::vector<double> density;  // nodal values on the uniform grid, may be empty
  std::vector<Atom> atoms;      // positions in [0, D]

  double total_mass() const;       // signed
  double total_variation() const;  // |density| lumped + sum |atom weights|
};

// Concentration record: integer multiples of 2*pi at isolated positions.
struct AtomicIntegerMeasure {
  double domain = 0.0;
  std::vector<std::pair<double, int>> atoms;  // (position, winding), sorted

  int total_index() const;            // sum |c_j|
  IntervalMeasure to_measure() const;  // weights 2*pi*c_j
};

void validate_measure(const IntervalMeasure& mu);
void validate_atomic(const AtomicIntegerMeasure& omega);

enum class FlatMode { open_interval, periodic };

struct FlatNormOptions {
  FlatMode mode = FlatMode::open_interval;
  // Density parts finer than this are conservatively rebinned (atoms are
  // never moved); the induced error is bounded by TV * (D/max_density_nodes)/2.
  std::size_t max_density_nodes = 1024;
};

double flat_norm(const IntervalMeasure& mu, const FlatNormOptions& opt = {});
double flat_distance(const IntervalMeasure& mu, const IntervalMeasure& nu,
                     const FlatNormOptions& opt = {});

// a - b with merged grids and concatenated atom lists.
IntervalMeasure subtract(const IntervalMeasure& a, const IntervalMeasure& b);

// Angle-derivative measure d(theta)/dx on the curve's own parameter grid;
// interval masses telescope to swept tangent angle.
IntervalMeasure curvature_measure(const PlanarCurve& curve);
IntervalMeasure curvature_measure(const AngleLifting& lifting);

// Certified bracket [lower, upper] on the flat norm, computed independently
// of the LP path: for each trade-off between annihilation and transport the
// dual is a min-cost flow on the node path (cycle when periodic) with a
// disposal node; the concave profile over the trade-off is maximized by
// golden section.  The lower bound comes from an explicitly feasible test
// function (flow potentials), the upper bound from an explicit flow.
struct FlatBracket {
  double lower = 0.0;
  double upper = 0.0;
};
FlatBracket flat_norm_oracle(const IntervalMeasure& mu,
                             FlatMode mode = FlatMode::open_interval,
                             std::size_t refinement = 0);

}  // namespace curvelab
