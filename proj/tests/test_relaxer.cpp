#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <random>
#include <vector>

#include "curvelab/detector.hpp"
#include "curvelab/energies.hpp"
#include "curvelab/errors.hpp"
#include "curvelab/geometry.hpp"
#include "curvelab/relaxer.hpp"

namespace {

using namespace curvelab;

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

// Smooth random angle fields pinned at zero, with the end value kept away
// from the wrap discontinuity of the end-angle penalty so central
// differences stay valid.
RelaxState random_state(std::mt19937& rng, std::size_t n) {
  std::uniform_real_distribution<double> amp(-1.5, 1.5);
  std::uniform_real_distribution<double> ramp(-2.5, 2.5);
  std::uniform_real_distribution<double> dom(0.5, 2.0);
  RelaxState st;
  st.D = dom(rng);
  st.penalty_weights = {1e2, 1e2, 1e2};
  st.theta.assign(n, 0.0);
  const double a1 = amp(rng), a2 = amp(rng), a3 = amp(rng);
  const double tilt = ramp(rng);
  for (std::size_t j = 1; j < n; ++j) {
    const double x = double(j) / double(n - 1);
    st.theta[j] = a1 * std::sin(kPi * x) + a2 * std::sin(2.0 * kPi * x) +
                  a3 * std::sin(3.0 * kPi * x) + tilt * x;
  }
  return st;
}

// The node-sampled transition-cost variation can exceed the discrete
// elastic energy by the trapezoid error of the concave speed factor, at
// most (sqrt(2)/24) * sum |dtheta|^3 per interval.  Near-minimizers sit on
// the bound, so audits of relaxed states need this term; hand-built curves
// keep a macroscopic margin and never feel it.
double quadrature_gap(const std::vector<double>& theta) {
  double acc = 0.0;
  for (std::size_t j = 0; j + 1 < theta.size(); ++j) {
    const double d = std::abs(theta[j + 1] - theta[j]);
    acc += d * d * d;
  }
  return std::sqrt(2.0) / 24.0 * acc;
}

// Exact discrete counterpart of the lower bound: per-interval AM-GM of the
// bending and potential shares.  Holds to roundoff for every angle field.
double discrete_transition_variation(const std::vector<double>& theta,
                                     double D, double epsilon) {
  const double h = D / double(theta.size() - 1);
  const double root = std::sqrt(epsilon);
  double acc = 0.0;
  for (std::size_t j = 0; j + 1 < theta.size(); ++j) {
    const double d = theta[j + 1] - theta[j];
    const double sj = std::sin(0.5 * theta[j]);
    const double sk = std::sin(0.5 * theta[j + 1]);
    const double b = root * d * d / h;
    const double p = (h / root) * (sj * sj + sk * sk);
    acc += 2.0 * std::sqrt(b * p);
  }
  return acc;
}

}  // namespace

TEST_CASE("the flat field at the chord length is already stationary") {
  RelaxState init;
  init.theta.assign(257, 0.0);
  init.D = 1.0;
  const std::vector<RelaxState> tr = minimize_open(1.0, 1e-3, init);
  REQUIRE(tr.size() == 3);
  for (const RelaxState& st : tr) {
    CHECK(st.step == 0);
    CHECK(st.converged);
    CHECK(st.energy == 0.0);
    CHECK(st.elastic == 0.0);
    CHECK(st.D == 1.0);
    REQUIRE(st.energy_history.size() == 1);
    CHECK(st.energy_history[0] == 0.0);
    for (const double t : st.theta) CHECK(t == 0.0);
  }
}

TEST_CASE("flat field gradients reduce to the chord penalty") {
  RelaxState st;
  st.theta.assign(129, 0.0);
  st.D = 0.7;
  st.penalty_weights = {1e3, 1e3, 1e3};
  const RelaxGradient g = relax_energy(st, 1.0, 1e-3);
  CHECK(g.bending == 0.0);
  CHECK(g.potential == 0.0);
  for (const double v : g.grad_theta) CHECK(v == 0.0);
  CHECK(g.residuals[0] == 0.0);
  CHECK(g.residuals[1] == doctest::Approx(-0.3).epsilon(1e-12));
  CHECK(g.residuals[2] == 0.0);
  // Only d/dD of lambda * (D - L)^2 survives; the closure run equals D.
  CHECK(g.grad_D == doctest::Approx(-600.0).epsilon(1e-12));
}

TEST_CASE("analytic gradients match central differences") {
  std::mt19937 rng(7);
  for (int i = 0; i < 10; ++i) {
    const RelaxState st = random_state(rng, 129);
    CHECK(grad_check(st, 1.0, 1e-3) <= 1e-6);
  }
}

TEST_CASE("penalty-only gradients match central differences tightly") {
  std::mt19937 rng(7);
  for (int i = 0; i < 10; ++i) {
    const RelaxState st = random_state(rng, 129);
    CHECK(grad_check(st, 1.0, 1e-3, false) <= 1e-8);
  }
}

TEST_CASE("a one-loop bump relaxes onto the transition profile") {
  const double eps = 1e-3;
  const std::size_t n = 513;
  RelaxOptions opts;
  opts.max_steps = 4000;
  const std::vector<RelaxState> tr =
      minimize_open(1.0, eps, make_loop_init(1.0, eps, n, 1), opts);
  REQUIRE(tr.size() == 3);
  for (const RelaxState& st : tr) {
    REQUIRE(st.energy_history.size() == st.step + 1);
    REQUIRE(st.residual_history.size() == st.step + 1);
    for (std::size_t k = 1; k < st.energy_history.size(); ++k)
      CHECK(st.energy_history[k] < st.energy_history[k - 1]);
  }

  const RelaxState& fin = tr.back();
  CHECK(fin.penalty_weights[0] == 1e4);
  CHECK(fin.elastic > 0.9 * kSigma);
  CHECK(fin.elastic < 4.0 * kPi);
  const RelaxGradient g = relax_energy(fin, 1.0, eps);
  CHECK(std::abs(g.bending - g.potential) < 0.1 * fin.elastic);
  const std::array<double, 3> res = fin.residuals();
  CHECK(std::abs(res[0]) < 1e-3);
  CHECK(std::abs(res[1]) < 1e-4);
  CHECK(std::abs(res[2]) < 1e-4);

  // Distance to the closed-form transition shape, both profiles normalized
  // by the full turn, in L2 of arclength, centered at the half-turn
  // crossing.
  const double h = fin.D / double(n - 1);
  double cross = 0.5 * fin.D;
  for (std::size_t j = 0; j + 1 < n; ++j)
    if (fin.theta[j] <= kPi && fin.theta[j + 1] > kPi) {
      cross = h * (double(j) +
                   (kPi - fin.theta[j]) / (fin.theta[j + 1] - fin.theta[j]));
      break;
    }
  const double core = std::sqrt(2.0 * eps);
  double dist2 = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double s = h * double(j) - cross;
    const double model = 4.0 * std::atan(std::exp(s / core));
    const double d = (fin.theta[j] - model) / kTwoPi;
    dist2 += h * d * d;
  }
  CHECK(std::sqrt(dist2) <= 0.1);

  // Lower bounds in the state's own discretization, where they are
  // provable: the AM-GM form exactly, the node-sampled form up to the
  // quadrature gap.
  CHECK(fin.elastic >= discrete_transition_variation(fin.theta, fin.D, eps) -
                           1e-12 * std::max(1.0, fin.elastic));
  AngleLifting native;
  native.domain = fin.D;
  native.speed = 1.0;
  native.closed = false;
  native.basepoint_angle = 0.0;
  native.theta = fin.theta;
  CHECK(fin.elastic >= mm_lower_bound(native) - quadrature_gap(fin.theta) -
                           1e-12 * std::max(1.0, fin.elastic));

  // The synthesized curve passes the clamped-arc audit against its own
  // endpoints, and re-measuring it through position differences reproduces
  // the state's elastic energy.
  const PlanarCurve curve = synthesize_relaxed(fin);
  const EnergyReport rep = open_excess_energy(
      curve, curve.samples.front(), curve.samples.back(), eps);
  CHECK(std::abs(rep.total - fin.elastic) < 0.05 * fin.elastic);
}

TEST_CASE("every recorded iterate respects the transition-cost bound") {
  const double eps = 1e-3;
  RelaxOptions opts;
  opts.max_steps = 600;
  opts.record_every = 50;
  const std::vector<RelaxState> tr =
      minimize_open(1.0, eps, make_loop_init(1.0, eps, 257, 1), opts);
  CHECK(tr.size() > 3);
  for (const RelaxState& st : tr) {
    // Assumption-free discrete form, exact up to roundoff.
    CHECK(st.elastic >=
          discrete_transition_variation(st.theta, st.D, eps) -
              1e-12 * std::max(1.0, st.elastic));
    // Node-sampled form needs the quadrature gap once the state hugs
    // equipartition.
    AngleLifting lift;
    lift.domain = st.D;
    lift.speed = 1.0;
    lift.closed = false;
    lift.basepoint_angle = 0.0;
    lift.theta = st.theta;
    CHECK(st.elastic >= mm_lower_bound(lift) - quadrature_gap(st.theta) -
                            1e-12 * std::max(1.0, st.elastic));
  }
}

TEST_CASE("relaxed states concentrate exactly the seeded loop count") {
  for (const double eps : {1e-2, 1e-3}) {
    RelaxOptions opts;
    opts.max_steps = 2000;
    const std::vector<RelaxState> tr =
        minimize_open(1.0, eps, make_loop_init(1.0, eps, 513, 1), opts);
    const PlanarCurve curve = synthesize_relaxed(tr.back());
    const SingularityExtraction ex =
        extract_singularities(curve, Vec2{1.0, 0.0}, 0.125);
    REQUIRE(ex.omega.atoms.size() == 1);
    CHECK(ex.omega.atoms[0].second == 1);
    CHECK(ex.omega.total_index() == 1);
    CHECK_FALSE(ex.low_confidence);
  }
}

TEST_CASE("a vanishing-gradient target stalls the line search") {
  // A gigantic penalty weight freezes any slide along the constraint
  // manifold below one ulp while the bent interior keeps the energy floor
  // strictly positive, so strict decrease must eventually fail with the
  // gradient still nonzero.
  RelaxState init;
  init.theta.assign(18, 0.0);
  for (std::size_t j = 1; j < 18; ++j)
    init.theta[j] = 0.001 * std::sin(kPi * double(j) / 17.0);
  init.D = 2.0;
  RelaxOptions opts;
  opts.grad_tol = 0.0;
  opts.max_steps = 5000;
  opts.lambda_schedule = {1e30};
  CHECK_THROWS_AS(minimize_open(1.0 / 3.0, 1.0, init, opts),
                  LineSearchStallError);
}

TEST_CASE("zero-loop init is the flat field") {
  const RelaxState st = make_loop_init(2.0, 1e-4, 65, 0);
  CHECK(st.D == 2.0);
  for (const double t : st.theta) CHECK(t == 0.0);
}

TEST_CASE("inadmissible setups are rejected") {
  RelaxState ok;
  ok.theta.assign(17, 0.0);
  ok.D = 1.0;
  const RelaxOptions defaults;

  RelaxState crooked = ok;
  crooked.theta[0] = 0.1;
  CHECK_THROWS_AS(minimize_open(1.0, 1e-3, crooked, defaults),
                  AdmissibilityError);

  RelaxState flat_domain = ok;
  flat_domain.D = 0.0;
  CHECK_THROWS_AS(minimize_open(1.0, 1e-3, flat_domain, defaults),
                  ParameterOutOfRangeError);

  RelaxState tiny;
  tiny.theta.assign(2, 0.0);
  tiny.D = 1.0;
  CHECK_THROWS_AS(minimize_open(1.0, 1e-3, tiny, defaults),
                  AdmissibilityError);

  RelaxOptions empty = defaults;
  empty.lambda_schedule.clear();
  CHECK_THROWS_AS(minimize_open(1.0, 1e-3, ok, empty),
                  ParameterOutOfRangeError);

  RelaxOptions negative = defaults;
  negative.lambda_schedule = {1e2, -1.0};
  CHECK_THROWS_AS(minimize_open(1.0, 1e-3, ok, negative),
                  ParameterOutOfRangeError);

  CHECK_THROWS_AS(minimize_open(0.0, 1e-3, ok, defaults),
                  ParameterOutOfRangeError);
  CHECK_THROWS_AS(minimize_open(1.0, 0.0, ok, defaults),
                  ParameterOutOfRangeError);
  CHECK_THROWS_AS(make_loop_init(1.0, 1e-3, 2, 1), ParameterOutOfRangeError);
  CHECK_THROWS_AS(make_loop_init(1.0, 1e-3, 65, -1),
                  ParameterOutOfRangeError);
}
