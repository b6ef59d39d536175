#include "curvelab/recovery_closed.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "block_detail.hpp"
#include "curvelab/errors.hpp"
#include "interp_detail.hpp"

namespace curvelab {
namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

double wrap_to_pi(double x) { return std::remainder(x, kTwoPi); }

double wrap_into(double s, double len) {
  double w = std::fmod(s, len);
  if (w < 0.0) w += len;
  return w;
}

double circ_dist(double a, double b, double len) {
  return std::abs(std::remainder(a - b, len));
}

Vec2 rotate(double phi, Vec2 v) {
  const double c = std::cos(phi), s = std::sin(phi);
  return {v.x * c - v.y * s, v.x * s + v.y * c};
}

// Angle defect against the opposite direction, as a function of arclength.
struct OppositeGap {
  const detail::ArclengthEvaluator& eval;
  double scale;   // evaluator arclength per nominal arclength
  double len;     // nominal length
  double target;  // phi1 + pi

  double operator()(double s) const {
    return wrap_to_pi(eval.angle(wrap_into(s, len) * scale) - target);
  }
  double rate(double s) const {
    return eval.angle_rate(wrap_into(s, len) * scale) * scale;
  }
};

// Newton polish inside a bracket from the node lifting; the bracket may sit
// a grid step off the smooth root, so widen up to three times before giving
// up.  Returns nothing when no sign change survives (tangency at grid scale).
std::optional<double> polish_root(const OppositeGap& g, double lo, double hi,
                                  double x0) {
  double ga = g(lo), gb = g(hi);
  const double width = hi - lo;
  for (int tries = 0; ga * gb > 0.0 && tries < 3; ++tries) {
    lo -= width;
    hi += width;
    ga = g(lo);
    gb = g(hi);
  }
  if (ga * gb > 0.0) return std::nullopt;
  double x = std::clamp(x0, lo, hi);
  for (int it = 0; it < 100; ++it) {
    double gx = g(x);
    if (std::abs(gx) <= 1e-13) return x;
    if ((gx > 0.0) == (ga > 0.0)) {
      lo = x;
      ga = gx;
    } else {
      hi = x;
    }
    double r = g.rate(x);
    double xn = std::abs(r) > 1e-10 ? x - gx / r : 0.5 * (lo + hi);
    x = (xn > lo && xn < hi) ? xn : 0.5 * (lo + hi);
  }
  return std::abs(g(x)) <= 1e-9 ? std::optional<double>(x) : std::nullopt;
}

double lifting_value(const AngleLifting& lift, double s, double len) {
  const std::size_t n = lift.theta.size();
  const double h = len / double(n - 1);
  double u = std::clamp(s / h, 0.0, double(n - 1));
  std::size_t k = std::min(std::size_t(u), n - 2);
  double frac = u - double(k);
  return lift.theta[k] + frac * (lift.theta[k + 1] - lift.theta[k]);
}

}  // namespace

std::vector<double> opposite_tangent_solutions(const PlanarCurve& gamma,
                                               double s1) {
  validate_curve(gamma);
  if (!gamma.closed)
    throw AdmissibilityError(
        "opposite_tangent_solutions: base curve must be closed");
  const AngleLifting lift = lift_tangent(gamma);
  if (turning_number(lift) != 1)
    throw NotFoundError(
        "opposite_tangent_solutions: turning number must be one");

  const double len = gamma.length();
  const double s1w = wrap_into(s1, len);
  const detail::ArclengthEvaluator eval(gamma);
  const double scale = eval.total() / len;
  const double phi1 = eval.angle(s1w * scale);
  const OppositeGap gap{eval, scale, len, phi1 + kPi};

  // Brackets: grid edges whose lifting values straddle the target modulo a
  // full turn.  The polished position replaces the linear crossing.
  const double theta_target = lifting_value(lift, s1w, len) + kPi;
  const std::size_t n = lift.theta.size();
  const double h = len / double(n - 1);
  std::vector<double> roots;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double ta = lift.theta[k], tb = lift.theta[k + 1];
    const double lo_v = std::min(ta, tb), hi_v = std::max(ta, tb);
    const long jlo = long(std::ceil((lo_v - theta_target) / kTwoPi - 1e-12));
    const long jhi = long(std::floor((hi_v - theta_target) / kTwoPi + 1e-12));
    for (long j = jlo; j <= jhi; ++j) {
      const double value = theta_target + kTwoPi * double(j);
      const double span = tb - ta;
      const double frac =
          std::abs(span) > 0.0 ? std::clamp((value - ta) / span, 0.0, 1.0) : 0.5;
      const double crude = (double(k) + frac) * h;
      std::optional<double> polished =
          polish_root(gap, double(k) * h, double(k + 1) * h, crude);
      roots.push_back(wrap_into(polished.value_or(crude), len));
    }
  }

  std::sort(roots.begin(), roots.end());
  const double tol = std::max(1e-9 * len, 1e-12);
  std::vector<double> unique;
  for (double r : roots)
    if (unique.empty() || r - unique.back() > tol) unique.push_back(r);
  if (unique.size() >= 2 && unique.front() + len - unique.back() < tol)
    unique.pop_back();
  return unique;
}

double find_opposite_tangent(const PlanarCurve& gamma, double s1) {
  const std::vector<double> sols = opposite_tangent_solutions(gamma, s1);
  const double len = gamma.length();
  const double mid = wrap_into(s1 + 0.5 * len, len);
  double best = sols.front();
  double best_d = std::numeric_limits<double>::infinity();
  for (double s : sols) {
    const double d = circ_dist(s, mid, len);
    if (d < best_d) {
      best_d = d;
      best = s;
    }
  }
  return best;
}

ClosedRecovery build_closed_recovery(const PlanarCurve& gamma,
                                     const AtomicIntegerMeasure& omega,
                                     double epsilon, double a, std::size_t n) {
  validate_curve(gamma);
  if (!gamma.closed)
    throw AdmissibilityError("build_closed_recovery: base curve must be closed");
  detail::check_block_params(epsilon, a, +1, n);
  validate_atomic(omega);
  const double len = gamma.length();
  if (std::abs(omega.domain - len) > 1e-9 * len)
    throw LengthMismatchError(
        "build_closed_recovery: record domain differs from the base length");
  {
    const AngleLifting lift = lift_tangent(gamma);
    if (turning_number(lift) != 1)
      throw TurningNumberError(
          "build_closed_recovery: base turning number must be one");
  }

  ClosedRecovery rec;
  rec.report.epsilon = epsilon;
  rec.report.a = a;

  const detail::BlockShape plus(epsilon, a, +1);
  const detail::BlockShape minus(epsilon, a, -1);
  const double delta = plus.delta();
  const double chord = plus.chord();
  const double block_len = plus.total_length();
  if (!(chord > 0.0))
    throw ParameterOutOfRangeError(
        "build_closed_recovery: block endpoints collapse at these parameters");

  struct Anchor {
    double pos;
    int sign;
  };
  std::vector<Anchor> blocks;
  for (const auto& [position, winding] : omega.atoms) {
    if (winding == 0) continue;
    const int m = std::abs(winding);
    const int sgn = winding > 0 ? 1 : -1;
    for (int k = 0; k < m; ++k)
      blocks.push_back(
          {wrap_into(position + (double(k) - 0.5 * double(m - 1)) * 2.0 * delta,
                     len),
           sgn});
  }
  if (blocks.empty()) {
    rec.curve = gamma;
    return rec;
  }
  std::sort(blocks.begin(), blocks.end(),
            [](const Anchor& l, const Anchor& r) { return l.pos < r.pos; });

  const double guard = 2.0 * delta * (1.0 - 1e-9);
  if (blocks.size() >= 2) {
    for (std::size_t i = 0; i + 1 < blocks.size(); ++i)
      if (blocks[i + 1].pos - blocks[i].pos < guard)
        throw WindowsOverlapError(
            "build_closed_recovery: block anchors closer than the window width");
    if (blocks.front().pos + len - blocks.back().pos < guard)
      throw WindowsOverlapError(
          "build_closed_recovery: block anchors closer than the window width");
  }

  const detail::ArclengthEvaluator eval(gamma);
  const double scale = eval.total() / len;

  struct Event {
    double pos;
    int sign;        // 0 for a segment
    double phi;      // block rotation; segments run along phi + pi
    double ins_len;  // inflated arclength of the insertion
    double gap;      // tangent defect at the splice
  };
  std::vector<Event> events;
  std::vector<double> centers;
  for (const Anchor& b : blocks) {
    events.push_back({b.pos, b.sign, eval.angle(b.pos * scale), block_len, 0.0});
    centers.push_back(b.pos);
  }
  auto fits = [&](double s) {
    for (double c : centers)
      if (circ_dist(s, c, len) < guard) return false;
    return true;
  };
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const std::vector<double> sols =
        opposite_tangent_solutions(gamma, blocks[i].pos);
    const double mid = wrap_into(blocks[i].pos + 0.5 * len, len);
    double canonical = sols.front();
    double canon_d = std::numeric_limits<double>::infinity();
    for (double s : sols) {
      const double d = circ_dist(s, mid, len);
      if (d < canon_d) {
        canon_d = d;
        canonical = s;
      }
    }
    double chosen = canonical;
    bool ok = fits(canonical);
    if (!ok) {
      // Reroute to the admissible solution farthest from existing windows.
      double best_clearance = 0.0;
      for (double s : sols) {
        double clearance = std::numeric_limits<double>::infinity();
        for (double c : centers)
          clearance = std::min(clearance, circ_dist(s, c, len));
        if (clearance >= guard && clearance > best_clearance) {
          best_clearance = clearance;
          chosen = s;
          ok = true;
        }
      }
    }
    if (!ok)
      throw WindowsOverlapError(
          "build_closed_recovery: no admissible opposite-tangent point for the "
          "block at arclength " +
          std::to_string(blocks[i].pos));
    centers.push_back(chosen);
    const double phi = events[i].phi;
    const double defect =
        std::abs(wrap_to_pi(eval.angle(chosen * scale) - phi - kPi));
    events.push_back({chosen, 0, phi, chord, defect});
  }
  std::sort(events.begin(), events.end(),
            [](const Event& l, const Event& r) { return l.pos < r.pos; });

  struct Piece {
    double len;
    int kind;  // 0 base span, 1 block, 2 segment
    double base0 = 0.0;
    Vec2 drift;
    Vec2 anchor;
    double phi = 0.0;
    int sign = 0;
    double gap = 0.0;
    double pos = 0.0;
  };
  std::vector<Piece> pieces;
  double cursor = 0.0;
  Vec2 drift{0.0, 0.0};
  for (const Event& e : events) {
    if (e.pos > cursor) {
      Piece base;
      base.len = e.pos - cursor;
      base.kind = 0;
      base.base0 = cursor;
      base.drift = drift;
      pieces.push_back(base);
    }
    Piece ins;
    ins.len = e.ins_len;
    ins.kind = e.sign != 0 ? 1 : 2;
    ins.anchor = eval.position(e.pos * scale) + drift;
    ins.phi = e.phi;
    ins.sign = e.sign;
    ins.gap = e.gap;
    ins.pos = e.pos;
    pieces.push_back(ins);
    const Vec2 step = chord * Vec2{std::cos(e.phi), std::sin(e.phi)};
    drift = e.sign != 0 ? drift + step : drift - step;
    cursor = e.pos;
  }
  if (len > cursor) {
    Piece base;
    base.len = len - cursor;
    base.kind = 0;
    base.base0 = cursor;
    base.drift = drift;
    pieces.push_back(base);
  }

  std::vector<double> cum(pieces.size() + 1, 0.0);
  for (std::size_t i = 0; i < pieces.size(); ++i)
    cum[i + 1] = cum[i] + pieces[i].len;
  const double inflated = cum.back();
  const double lambda = len / inflated;
  rec.report.lambda = lambda;

  PlanarCurve out;
  out.param = ParamKind::arclength;
  out.domain = len;
  out.speed = 1.0;
  out.closed = true;
  out.samples.resize(n);
  std::size_t j = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const double t = inflated * double(k) / double(n - 1);
    while (j + 1 < pieces.size() && t > cum[j + 1]) ++j;
    const Piece& piece = pieces[j];
    const double local = std::clamp(t - cum[j], 0.0, piece.len);
    Vec2 p;
    if (piece.kind == 0) {
      p = eval.position((piece.base0 + local) * scale) + piece.drift;
    } else if (piece.kind == 1) {
      const detail::BlockShape& shape = piece.sign > 0 ? plus : minus;
      p = piece.anchor + rotate(piece.phi, shape.at(local).point);
    } else {
      p = piece.anchor - local * Vec2{std::cos(piece.phi), std::sin(piece.phi)};
    }
    out.samples[k] = lambda * p;
  }
  out.samples.back() = out.samples.front();
  rec.curve = std::move(out);

  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const Piece& piece = pieces[i];
    if (piece.kind == 0) continue;
    ClosedInsertion ins;
    ins.anchor = piece.pos;
    ins.sign = piece.sign;
    ins.start = lambda * cum[i];
    ins.length = lambda * piece.len;
    ins.tangent_gap = piece.gap;
    rec.report.insertions.push_back(ins);
    rec.report.max_junction_gap =
        std::max(rec.report.max_junction_gap, piece.gap);
  }
  return rec;
}

}  // namespace curvelab
