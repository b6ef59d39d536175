#include "curvelab/relaxer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <utility>

#include "curvelab/errors.hpp"

namespace curvelab {
namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

double wrap_to_pi(double a) { return a - kTwoPi * std::round(a / kTwoPi); }

double node_weight(std::size_t j, std::size_t n) {
  return (j == 0 || j + 1 == n) ? 0.5 : 1.0;
}

void check_problem(double L, double epsilon) {
  if (!(L > 0.0))
    throw ParameterOutOfRangeError("chord length must be positive");
  if (!(epsilon > 0.0))
    throw ParameterOutOfRangeError("epsilon must be positive");
}

void check_state(const RelaxState& state) {
  if (state.theta.size() < 3)
    throw AdmissibilityError("angle field needs at least three nodes");
  if (!(state.D > 0.0))
    throw ParameterOutOfRangeError("domain length must be positive");
}

RelaxGradient eval(const std::vector<double>& th, double D,
                   const std::array<double, 3>& lam, double L, double epsilon,
                   bool include_elastic, bool want_grad) {
  const std::size_t n = th.size();
  const double m = double(n - 1);
  const double h = D / m;
  const double root = std::sqrt(epsilon);

  double bend = 0.0;
  for (std::size_t j = 0; j + 1 < n; ++j) {
    const double d = th[j + 1] - th[j];
    bend += d * d;
  }
  bend *= root / h;

  double pot = 0.0, run = 0.0, rise = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double w = node_weight(j, n);
    const double s = std::sin(0.5 * th[j]);
    pot += w * 2.0 * s * s;  // 1 - cos without cancellation
    run += w * std::cos(th[j]);
    rise += w * std::sin(th[j]);
  }
  pot *= h / root;
  run *= h;
  rise *= h;

  const double ra = wrap_to_pi(th[n - 1]);
  const double cx = run - L;
  const double cy = rise;

  RelaxGradient out;
  out.bending = include_elastic ? bend : 0.0;
  out.potential = include_elastic ? pot : 0.0;
  out.elastic = out.bending + out.potential;
  out.residuals = {ra, cx, cy};
  out.energy =
      out.elastic + lam[0] * ra * ra + lam[1] * cx * cx + lam[2] * cy * cy;
  if (!want_grad) return out;

  out.grad_theta.assign(n, 0.0);
  for (std::size_t j = 1; j < n; ++j) {
    const double w = node_weight(j, n);
    const double sn = std::sin(th[j]);
    const double cs = std::cos(th[j]);
    double g = 0.0;
    if (include_elastic) {
      double d2 = th[j] - th[j - 1];
      if (j + 1 < n) d2 -= th[j + 1] - th[j];
      g += (2.0 * root / h) * d2;
      g += (h / root) * w * sn;
    }
    g += -2.0 * lam[1] * cx * h * w * sn;
    g += 2.0 * lam[2] * cy * h * w * cs;
    if (j + 1 == n) g += 2.0 * lam[0] * ra;
    out.grad_theta[j] = g;
  }
  double gd = 0.0;
  if (include_elastic) gd += (pot - bend) / D;
  gd += 2.0 * lam[1] * cx * run / D + 2.0 * lam[2] * cy * rise / D;
  out.grad_D = gd;
  return out;
}

struct Direction {
  std::vector<double> d_theta;
  double d_D = 0.0;
  double pairing = 0.0;  // <direction, differential>, nonnegative
  double sup = 0.0;
};

// Diagonal-metric descent direction.  Scaling the differential by the
// inverse of the diagonal curvature keeps the per-step progress of the
// smooth modes independent of the grid and of the penalty weights.
Direction descent_direction(const std::vector<double>& th, double D,
                            const std::array<double, 3>& lam, double L,
                            double epsilon, bool include_elastic,
                            const RelaxGradient& g) {
  const std::size_t n = th.size();
  const double h = D / double(n - 1);
  const double root = std::sqrt(epsilon);

  Direction dir;
  dir.d_theta.assign(n, 0.0);
  for (std::size_t j = 1; j < n; ++j) {
    const double w = node_weight(j, n);
    const double hw = h * w;
    const double sn = std::sin(th[j]);
    const double cs = std::cos(th[j]);
    double diag = 2.0 * (lam[1] * sn * sn + lam[2] * cs * cs) * hw * hw;
    if (include_elastic)
      diag += (j + 1 == n ? 2.0 : 4.0) * root / h + (h / root) * w;
    if (j + 1 == n) diag += 2.0 * lam[0];
    if (!(diag > 0.0)) diag = 1.0;
    const double d = g.grad_theta[j] / diag;
    dir.d_theta[j] = d;
    dir.pairing += d * g.grad_theta[j];
    dir.sup = std::max(dir.sup, std::abs(d));
  }

  const double run = g.residuals[1] + L;
  const double rise = g.residuals[2];
  double diag_d = 2.0 * (lam[1] * run * run + lam[2] * rise * rise) / (D * D);
  if (include_elastic) diag_d += (g.bending + g.potential) / (D * D);
  if (!(diag_d > 1e-12)) diag_d = 1.0;
  dir.d_D = g.grad_D / diag_d;
  dir.pairing += dir.d_D * g.grad_D;
  return dir;
}

}  // namespace

RelaxGradient relax_energy(const RelaxState& state, double L, double epsilon,
                           bool include_elastic) {
  check_problem(L, epsilon);
  check_state(state);
  return eval(state.theta, state.D, state.penalty_weights, L, epsilon,
              include_elastic, true);
}

double grad_check(const RelaxState& state, double L, double epsilon,
                  bool include_elastic) {
  const RelaxGradient g = relax_energy(state, L, epsilon, include_elastic);
  double scale = std::max(1.0, std::abs(state.D));
  for (const double t : state.theta) scale = std::max(scale, std::abs(t));
  const double fd = 1e-6 * scale;

  double gmax = std::abs(g.grad_D);
  for (std::size_t j = 1; j < state.theta.size(); ++j)
    gmax = std::max(gmax, std::abs(g.grad_theta[j]));

  std::vector<double> th = state.theta;
  const auto energy_at = [&](const std::vector<double>& f, double D) {
    return eval(f, D, state.penalty_weights, L, epsilon, include_elastic,
                false)
        .energy;
  };
  double worst = 0.0;
  for (std::size_t j = 1; j < th.size(); ++j) {
    const double keep = th[j];
    th[j] = keep + fd;
    const double ep = energy_at(th, state.D);
    th[j] = keep - fd;
    const double em = energy_at(th, state.D);
    th[j] = keep;
    worst =
        std::max(worst, std::abs((ep - em) / (2.0 * fd) - g.grad_theta[j]));
  }
  const double ep = energy_at(th, state.D + fd);
  const double em = energy_at(th, state.D - fd);
  worst = std::max(worst, std::abs((ep - em) / (2.0 * fd) - g.grad_D));
  return worst / std::max(gmax, 1.0);
}

std::vector<RelaxState> minimize_open(double L, double epsilon,
                                      RelaxState init,
                                      const RelaxOptions& opts) {
  check_problem(L, epsilon);
  check_state(init);
  if (std::abs(init.theta.front()) > 1e-12)
    throw AdmissibilityError("initial angle field must start at zero");
  if (opts.lambda_schedule.empty())
    throw ParameterOutOfRangeError("penalty schedule must not be empty");
  for (const double lam : opts.lambda_schedule)
    if (!(lam > 0.0))
      throw ParameterOutOfRangeError("penalty weights must be positive");

  std::vector<RelaxState> trajectory;
  RelaxState cur = std::move(init);
  cur.theta[0] = 0.0;

  std::vector<double> cand(cur.theta.size(), 0.0);
  for (const double lambda : opts.lambda_schedule) {
    cur.penalty_weights = {lambda, lambda, lambda};
    cur.step = 0;
    cur.converged = false;
    cur.energy_history.clear();
    cur.residual_history.clear();

    RelaxGradient g = eval(cur.theta, cur.D, cur.penalty_weights, L, epsilon,
                           opts.include_elastic, true);
    Direction dir = descent_direction(cur.theta, cur.D, cur.penalty_weights,
                                      L, epsilon, opts.include_elastic, g);
    cur.energy = g.energy;
    cur.elastic = g.elastic;
    cur.grad_norm = std::max(dir.sup, std::abs(dir.d_D));
    cur.energy_history.push_back(cur.energy);
    cur.residual_history.push_back(g.residuals);
    cur.converged = cur.grad_norm <= opts.grad_tol;

    double t = 1.0;
    while (cur.step < opts.max_steps && !cur.converged) {
      t = std::min(2.0 * t, 1.0);
      bool accepted = false;
      RelaxGradient next;
      double cand_d = cur.D;
      for (int shrink = 0; shrink < 60; ++shrink) {
        cand_d = cur.D - t * dir.d_D;
        if (cand_d > 1e-9) {
          for (std::size_t j = 1; j < cand.size(); ++j)
            cand[j] = cur.theta[j] - t * dir.d_theta[j];
          next = eval(cand, cand_d, cur.penalty_weights, L, epsilon,
                      opts.include_elastic, true);
          // Strict decrease, so a step at the numerical floor stalls
          // instead of being accepted with zero progress.
          if (next.energy < cur.energy - 1e-4 * t * dir.pairing) {
            accepted = true;
            break;
          }
        }
        t *= 0.5;
      }
      if (!accepted) {
        char msg[160];
        std::snprintf(msg, sizeof(msg),
                      "line search stalled at penalty weight %.3g, step %zu, "
                      "energy %.12g, gradient norm %.3e",
                      lambda, cur.step, cur.energy, cur.grad_norm);
        throw LineSearchStallError(msg);
      }

      cur.theta.swap(cand);
      cur.theta[0] = 0.0;
      cur.D = cand_d;
      g = std::move(next);
      dir = descent_direction(cur.theta, cur.D, cur.penalty_weights, L,
                              epsilon, opts.include_elastic, g);
      cur.energy = g.energy;
      cur.elastic = g.elastic;
      cur.grad_norm = std::max(dir.sup, std::abs(dir.d_D));
      ++cur.step;
      cur.energy_history.push_back(cur.energy);
      cur.residual_history.push_back(g.residuals);
      cur.converged = cur.grad_norm <= opts.grad_tol;
      if (opts.record_every > 0 && !cur.converged &&
          cur.step % opts.record_every == 0)
        trajectory.push_back(cur);
    }
    trajectory.push_back(cur);
  }
  return trajectory;
}

RelaxState make_loop_init(double L, double epsilon, std::size_t n,
                          int loops) {
  check_problem(L, epsilon);
  if (n < 3)
    throw ParameterOutOfRangeError("angle field needs at least three nodes");
  if (loops < 0)
    throw ParameterOutOfRangeError("loop count must be nonnegative");

  RelaxState st;
  const double root = std::sqrt(epsilon);
  st.D = L + 5.656854249492380 * root * double(loops);
  st.theta.assign(n, 0.0);
  if (loops == 0) return st;

  const double h = st.D / double(n - 1);
  const double width = std::max(5.0 * std::sqrt(2.0 * epsilon), 12.0 * h);
  const double center = 0.5 * st.D;
  for (std::size_t j = 1; j < n; ++j) {
    const double x = h * double(j);
    double s = (x - center) / width + 0.5;
    s = std::clamp(s, 0.0, 1.0);
    st.theta[j] = kTwoPi * double(loops) * s * s * (3.0 - 2.0 * s);
  }
  return st;
}

PlanarCurve synthesize_relaxed(const RelaxState& state) {
  check_state(state);
  AngleLifting lift;
  lift.domain = state.D;
  lift.speed = 1.0;
  lift.closed = false;
  lift.basepoint_angle = state.theta.front();
  lift.theta = state.theta;
  return synthesize_from_angle(lift, {0.0, 0.0});
}

}  // namespace curvelab
