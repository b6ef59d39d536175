#pragma once

// Corner-aware cubic interpolant over a sample polygon, plus an evaluator
// that answers position and tangent queries at arbitrary arclength.  Shared
// by the resampler and by constructions that splice material into a curve.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "curvelab/errors.hpp"
#include "curvelab/geometry.hpp"
#include "quadrature.hpp"

namespace curvelab::detail {

struct HermiteSegment {
  Vec2 p0, p1, m0, m1;

  Vec2 eval(double t) const {
    double t2 = t * t, t3 = t2 * t;
    double h00 = 2 * t3 - 3 * t2 + 1;
    double h10 = t3 - 2 * t2 + t;
    double h01 = -2 * t3 + 3 * t2;
    double h11 = t3 - t2;
    return h00 * p0 + h10 * m0 + h01 * p1 + h11 * m1;
  }
  Vec2 deriv(double t) const {
    double t2 = t * t;
    double g00 = 6 * t2 - 6 * t;
    double g10 = 3 * t2 - 4 * t + 1;
    double g01 = -6 * t2 + 6 * t;
    double g11 = 3 * t2 - 2 * t;
    return g00 * p0 + g10 * m0 + g01 * p1 + g11 * m1;
  }
  Vec2 deriv2(double t) const {
    double q00 = 12 * t - 6;
    double q10 = 6 * t - 4;
    double q01 = -12 * t + 6;
    double q11 = 6 * t - 2;
    return q00 * p0 + q10 * m0 + q01 * p1 + q11 * m1;
  }
  // Arclength of [0, t] by Gauss-Legendre.
  double partial_length(double t) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < kGlNode.size(); ++i) {
      double a = 0.5 * t * (1.0 - kGlNode[i]);
      double b = 0.5 * t * (1.0 + kGlNode[i]);
      acc += kGlWeight[i] * (norm(deriv(a)) + norm(deriv(b)));
    }
    return 0.5 * t * acc;
  }
};

// Corner-aware interpolant over the sample polygon.  Catmull-Rom tangents in
// smooth regions; segments that end at a corner vertex (turn angle > pi/4)
// use the one-sided chord there, which keeps straight runs exactly straight.
inline std::vector<HermiteSegment> build_interpolant(const PlanarCurve& curve) {
  constexpr double kQuarterTurn = 0.78539816339744830962;
  const std::vector<Vec2>& p = curve.samples;
  const std::size_t n = p.size();
  const std::size_t m = curve.closed ? n - 1 : n;  // distinct nodes
  const std::size_t nseg = n - 1;

  auto node = [&](std::ptrdiff_t k) -> Vec2 {
    if (curve.closed) {
      std::ptrdiff_t mm = std::ptrdiff_t(m);
      return p[std::size_t(((k % mm) + mm) % mm)];
    }
    return p[std::size_t(std::clamp<std::ptrdiff_t>(k, 0, std::ptrdiff_t(n) - 1))];
  };

  std::vector<Vec2> tang(m);
  std::vector<char> corner(m, 0);
  for (std::size_t k = 0; k < m; ++k) {
    bool interior = curve.closed || (k > 0 && k + 1 < n);
    if (interior) {
      Vec2 eprev = node(std::ptrdiff_t(k)) - node(std::ptrdiff_t(k) - 1);
      Vec2 enext = node(std::ptrdiff_t(k) + 1) - node(std::ptrdiff_t(k));
      double turn = std::atan2(std::abs(cross(eprev, enext)), dot(eprev, enext));
      if (turn > kQuarterTurn) corner[k] = 1;
      tang[k] = 0.5 * (enext + eprev);
    } else if (k == 0) {
      tang[k] = p[1] - p[0];
      corner[k] = 1;
    } else {
      tang[k] = p[n - 1] - p[n - 2];
      corner[k] = 1;
    }
  }

  std::vector<HermiteSegment> segs(nseg);
  for (std::size_t k = 0; k < nseg; ++k) {
    Vec2 a = p[k], b = p[k + 1];
    Vec2 chord = b - a;
    std::size_t kl = k % m, kr = (k + 1) % m;
    segs[k] = {a, b, corner[kl] ? chord : tang[kl], corner[kr] ? chord : tang[kr]};
  }
  return segs;
}

// Arclength lookup over the interpolant: binary search for the segment, then
// safeguarded Newton on the within-segment length.
class ArclengthEvaluator {
 public:
  explicit ArclengthEvaluator(const PlanarCurve& curve)
      : segs_(build_interpolant(curve)), cum_(segs_.size() + 1, 0.0) {
    for (std::size_t k = 0; k < segs_.size(); ++k)
      cum_[k + 1] = cum_[k] + segs_[k].partial_length(1.0);
    if (!(cum_.back() > 0.0))
      throw DegenerateSegmentError("curve has zero length");
  }

  double total() const { return cum_.back(); }

  Vec2 position(double s) const {
    Local loc = locate(s);
    return segs_[loc.seg].eval(loc.t);
  }
  Vec2 velocity(double s) const {
    Local loc = locate(s);
    return segs_[loc.seg].deriv(loc.t);
  }
  double angle(double s) const {
    Vec2 v = velocity(s);
    return std::atan2(v.y, v.x);
  }
  // d(angle)/d(arclength)
  double angle_rate(double s) const {
    Local loc = locate(s);
    Vec2 d = segs_[loc.seg].deriv(loc.t);
    Vec2 dd = segs_[loc.seg].deriv2(loc.t);
    double sp = norm(d);
    return cross(d, dd) / std::max(sp * sp * sp, 1e-300);
  }

 private:
  struct Local {
    std::size_t seg;
    double t;
  };

  Local locate(double s) const {
    s = std::clamp(s, 0.0, total());
    std::size_t seg =
        std::size_t(std::upper_bound(cum_.begin(), cum_.end(), s) - cum_.begin());
    seg = seg > 0 ? seg - 1 : 0;
    if (seg >= segs_.size()) seg = segs_.size() - 1;
    const double want = s - cum_[seg];
    const double seg_len = cum_[seg + 1] - cum_[seg];
    double lo = 0.0, hi = 1.0;
    double t = std::clamp(want / std::max(seg_len, 1e-300), 0.0, 1.0);
    for (int it = 0; it < 60; ++it) {
      double f = segs_[seg].partial_length(t) - want;
      if (std::abs(f) <= 1e-13 * std::max(1.0, total())) break;
      if (f > 0)
        hi = t;
      else
        lo = t;
      double d = norm(segs_[seg].deriv(t));
      double tn = d > 0.0 ? t - f / d : 0.5 * (lo + hi);
      t = (tn > lo && tn < hi) ? tn : 0.5 * (lo + hi);
    }
    return {seg, t};
  }

  std::vector<HermiteSegment> segs_;
  std::vector<double> cum_;
};

}  // namespace curvelab::detail
