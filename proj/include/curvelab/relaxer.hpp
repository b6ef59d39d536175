#pragma once

// Descent-based minimization of the phase-field form of the scaled excess
// energy over tangent angle fields with penalized closure constraints.
// Produces curvature-concentrating states that were not assembled by hand,
// closing the loop between the energy sweeps and the detector.

#include <array>
#include <cstddef>
#include <vector>

#include "curvelab/geometry.hpp"

namespace curvelab {

// Angle field on a uniform grid over [0, D] with theta[0] pinned to zero.
// D is a free optimization variable (the curve length).  A state carries the
// per-step history of its penalty stage, so a returned trajectory is a
// handful of states plus optional snapshots, not thousands of fields.
struct RelaxState {
  std::vector<double> theta;
  double D = 0.0;
  // Weights of the closure penalties, in order: end angle modulo full
  // turns, horizontal closure against the chord length, vertical closure
  // against zero.  The fourth constraint, theta(0) = 0, is held exactly.
  std::array<double, 3> penalty_weights{0.0, 0.0, 0.0};
  std::size_t step = 0;    // accepted descent steps taken in this stage
  bool converged = false;  // gradient norm reached the tolerance
  double energy = 0.0;     // current total, penalties included
  double elastic = 0.0;    // bending + potential parts only
  double grad_norm = 0.0;  // sup norm of the descent direction
  std::vector<double> energy_history;  // entry 0 is the stage's start energy
  std::vector<std::array<double, 3>> residual_history;

  std::array<double, 3> residuals() const {
    return residual_history.empty() ? std::array<double, 3>{0.0, 0.0, 0.0}
                                    : residual_history.back();
  }
};

struct RelaxOptions {
  std::size_t max_steps = 4000;  // per penalty stage
  double grad_tol = 1e-6;        // sup-norm termination threshold
  std::vector<double> lambda_schedule{1e2, 1e3, 1e4};
  bool include_elastic = true;  // false drops the epsilon terms (grad tests)
  // When positive, push a snapshot state into the trajectory every this many
  // accepted steps, in addition to the per-stage final states.
  std::size_t record_every = 0;
};

// Energy value and analytic differential with respect to the free
// coordinates (theta[1..], D); component 0 of grad_theta stays zero because
// theta[0] is pinned.  Residuals are signed: end angle wrapped to
// (-pi, pi], horizontal closure minus the chord length, vertical closure.
struct RelaxGradient {
  double energy = 0.0;
  double elastic = 0.0;    // bending + potential
  double bending = 0.0;    // sqrt(eps) * sum (dtheta/h)^2 h
  double potential = 0.0;  // (1/sqrt(eps)) * sum (1 - cos theta) h
  std::array<double, 3> residuals{0.0, 0.0, 0.0};
  std::vector<double> grad_theta;
  double grad_D = 0.0;
};
RelaxGradient relax_energy(const RelaxState& state, double L, double epsilon,
                           bool include_elastic = true);

// Steepest descent with Armijo backtracking (c = 1e-4, shrink 0.5) through
// the penalty schedule.  The descent metric is diagonal and grid-weighted,
// so step rates do not degrade under refinement; the recorded energy
// histories are strictly decreasing within each stage.  Throws
// LineSearchStallError when no descent step above the numerical floor
// exists while the gradient norm still exceeds the tolerance.
std::vector<RelaxState> minimize_open(double L, double epsilon,
                                      RelaxState init,
                                      const RelaxOptions& opts = {});

// Max discrepancy between the analytic differential and central finite
// differences over the free coordinates, relative to the gradient scale.
double grad_check(const RelaxState& state, double L, double epsilon,
                  bool include_elastic = true);

// Ready-made initial guess: `loops` full turns over a transition window of
// width a few sqrt(epsilon) in the middle of the domain, with the domain
// length padded by the expected transition excess.
RelaxState make_loop_init(double L, double epsilon, std::size_t n, int loops);

// The state's angle field integrated into a unit-speed curve from the
// origin.
PlanarCurve synthesize_relaxed(const RelaxState& state);

}  // namespace curvelab
