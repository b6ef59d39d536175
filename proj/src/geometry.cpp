#include "curvelab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <unordered_map>
#include <unordered_set>

#include "interp_detail.hpp"

namespace curvelab {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

double coordinate_scale(const std::vector<Vec2>& pts) {
  double m = 1.0;
  for (const Vec2& p : pts) m = std::max({m, std::abs(p.x), std::abs(p.y)});
  return m;
}

// Increment wrapped into (-pi, pi]; exactly -pi flips to +pi.
double wrap_increment(double d, bool* ambiguous) {
  double w = std::remainder(d, kTwoPi);
  if (std::abs(std::abs(w) - kPi) <= 1e-12 * kPi) {
    *ambiguous = true;
    w = kPi;
  }
  if (w <= -kPi) w = kPi;
  return w;
}

double orient(Vec2 a, Vec2 b, Vec2 c) { return cross(b - a, c - a); }

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) {
  Vec2 ab = b - a;
  double den = dot(ab, ab);
  double t = den > 0.0 ? std::clamp(dot(p - a, ab) / den, 0.0, 1.0) : 0.0;
  return norm(p - (a + t * ab));
}

}  // namespace

void validate_curve(const PlanarCurve& curve) {
  const std::size_t n = curve.samples.size();
  if (n < 2) throw AdmissibilityError("curve needs at least two samples");
  if (curve.closed && n < 4)
    throw AdmissibilityError("closed curve needs at least four samples");
  if (!(curve.domain > 0.0)) throw AdmissibilityError("curve domain must be positive");
  if (!(curve.speed > 0.0)) throw AdmissibilityError("curve speed must be positive");
  const double scale = coordinate_scale(curve.samples);
  const std::size_t last_edge = n - 1;
  for (std::size_t k = 0; k < last_edge; ++k) {
    if (norm(curve.samples[k + 1] - curve.samples[k]) <= 1e-14 * scale)
      throw DegenerateSegmentError("consecutive samples coincide at node " +
                                   std::to_string(k));
  }
  if (curve.closed) {
    double seam = norm(curve.samples.front() - curve.samples.back());
    if (seam > 1e-6 * std::max(curve.length(), scale))
      throw AdmissibilityError("closed curve does not duplicate its seam node");
  }
}

AngleLifting lift_tangent(const PlanarCurve& curve) {
  validate_curve(curve);
  const std::vector<Vec2>& p = curve.samples;
  const std::size_t n = p.size();
  const std::size_t m = curve.closed ? n - 1 : n;

  auto node = [&](std::ptrdiff_t k) -> Vec2 {
    std::ptrdiff_t mm = std::ptrdiff_t(m);
    return p[std::size_t(((k % mm) + mm) % mm)];
  };

  // Node tangent vectors: fourth-order central stencils in the interior (the
  // synthesized round-trip inherits this accuracy), one-sided at open ends.
  std::vector<Vec2> tv(m);
  for (std::size_t k = 0; k < m; ++k) {
    Vec2 v;
    if (curve.closed) {
      std::ptrdiff_t q = std::ptrdiff_t(k);
      v = m >= 5 ? 8.0 * (node(q + 1) - node(q - 1)) - (node(q + 2) - node(q - 2))
                 : node(q + 1) - node(q - 1);
    } else if (k == 0) {
      v = n >= 3 ? -3.0 * p[0] + 4.0 * p[1] - p[2] : p[1] - p[0];
    } else if (k + 1 == n) {
      v = n >= 3 ? 3.0 * p[n - 1] - 4.0 * p[n - 2] + p[n - 3] : p[n - 1] - p[n - 2];
    } else if (k >= 2 && k + 3 <= n) {
      v = 8.0 * (p[k + 1] - p[k - 1]) - (p[k + 2] - p[k - 2]);
    } else {
      v = p[k + 1] - p[k - 1];
    }
    // A vanishing central difference marks a cusp at grid scale; fall back to
    // the nearest edge direction so the angle is still defined.
    double local = 0.0;
    if (k + 1 < n) local += norm(p[k + 1] - p[k]);
    if (k > 0) local += norm(p[k] - p[k - 1]);
    if (curve.closed && k == 0) local += norm(p[1] - p[0]) + norm(p[n - 1] - p[n - 2]);
    if (norm(v) < 1e-9 * local) v = k + 1 < n ? p[k + 1] - p[k] : p[k] - p[k - 1];
    tv[k] = v;
  }

  AngleLifting lift;
  lift.domain = curve.domain;
  lift.speed = curve.speed;
  lift.closed = curve.closed;
  lift.theta.resize(n);

  double theta0 = std::atan2(tv[0].y, tv[0].x);
  if (theta0 <= -kPi) theta0 = kPi;
  lift.basepoint_angle = theta0;
  lift.theta[0] = theta0;
  double prev_raw = theta0;
  for (std::size_t k = 1; k < n; ++k) {
    Vec2 v = tv[k % m];
    double raw = std::atan2(v.y, v.x);
    double inc = wrap_increment(raw - prev_raw, &lift.ambiguous_branch);
    lift.theta[k] = lift.theta[k - 1] + inc;
    prev_raw = raw;
  }
  return lift;
}

std::vector<double> curvature_profile(const AngleLifting& lifting) {
  const std::vector<double>& th = lifting.theta;
  const std::size_t n = th.size();
  if (n < 2) throw AdmissibilityError("lifting needs at least two nodes");
  const double h = lifting.spacing();
  std::vector<double> kappa(n);
  if (lifting.closed) {
    // Node n-1 duplicates node 0; neighbors wrap with the accumulated turn.
    const double W = lifting.total_turn();
    auto at = [&](std::ptrdiff_t k) -> double {
      std::ptrdiff_t mm = std::ptrdiff_t(n) - 1;
      if (k < 0) return th[std::size_t(k + mm)] - W;
      if (k >= mm) return th[std::size_t(k - mm)] + W;
      return th[std::size_t(k)];
    };
    for (std::size_t k = 0; k + 1 < n; ++k)
      kappa[k] = (at(std::ptrdiff_t(k) + 1) - at(std::ptrdiff_t(k) - 1)) / (2.0 * h);
    kappa[n - 1] = kappa[0];
  } else {
    for (std::size_t k = 1; k + 1 < n; ++k)
      kappa[k] = (th[k + 1] - th[k - 1]) / (2.0 * h);
    if (n >= 3) {
      kappa[0] = (-3.0 * th[0] + 4.0 * th[1] - th[2]) / (2.0 * h);
      kappa[n - 1] = (3.0 * th[n - 1] - 4.0 * th[n - 2] + th[n - 3]) / (2.0 * h);
    } else {
      kappa[0] = kappa[n - 1] = (th[1] - th[0]) / h;
    }
  }
  const double inv_speed = 1.0 / lifting.speed;
  for (double& k : kappa) k *= inv_speed;
  return kappa;
}

PlanarCurve synthesize_from_angle(const AngleLifting& lifting, Vec2 base) {
  const std::size_t n = lifting.theta.size();
  if (n < 2) throw AdmissibilityError("lifting needs at least two nodes");
  PlanarCurve out;
  out.param = lifting.speed == 1.0 ? ParamKind::arclength : ParamKind::constant_speed;
  out.domain = lifting.domain;
  out.speed = lifting.speed;
  out.closed = lifting.closed;
  out.samples.resize(n);
  out.samples[0] = base;
  const double step = lifting.speed * lifting.spacing() * 0.5;
  double c0 = std::cos(lifting.theta[0]), s0 = std::sin(lifting.theta[0]);
  for (std::size_t k = 1; k < n; ++k) {
    double c1 = std::cos(lifting.theta[k]), s1 = std::sin(lifting.theta[k]);
    out.samples[k] = out.samples[k - 1] + Vec2{step * (c0 + c1), step * (s0 + s1)};
    c0 = c1;
    s0 = s1;
  }
  return out;
}

double turning_fraction(const AngleLifting& lifting) {
  return lifting.total_turn() / kTwoPi;
}

int turning_number(const AngleLifting& lifting) {
  return int(std::lround(turning_fraction(lifting)));
}

PlanarCurve resample_arclength(const PlanarCurve& curve, std::size_t n) {
  validate_curve(curve);
  if (n < 2) throw ParameterOutOfRangeError("resample needs at least two nodes");
  detail::ArclengthEvaluator eval(curve);
  const double total = eval.total();

  PlanarCurve out;
  out.param = ParamKind::arclength;
  out.domain = total;
  out.speed = 1.0;
  out.closed = curve.closed;
  out.samples.resize(n);
  for (std::size_t j = 0; j < n; ++j)
    out.samples[j] = eval.position(total * double(j) / double(n - 1));
  if (curve.closed) out.samples.back() = out.samples.front();
  return out;
}

PlanarCurve to_constant_speed(const PlanarCurve& curve, double L) {
  validate_curve(curve);
  if (curve.closed) throw AdmissibilityError("constant-speed projection is for open curves");
  if (curve.param != ParamKind::arclength)
    throw AdmissibilityError("input must be arclength parametrized");
  if (!(L > 0.0)) throw ParameterOutOfRangeError("target domain must be positive");
  PlanarCurve out = curve;
  out.param = ParamKind::constant_speed;
  out.speed = curve.domain / L;
  out.domain = L;
  return out;
}

double polyline_length(const std::vector<Vec2>& samples) {
  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < samples.size(); ++k)
    acc += norm(samples[k + 1] - samples[k]);
  return acc;
}

PlanarCurve rigid_transform(const PlanarCurve& curve, double angle, Vec2 shift) {
  PlanarCurve out = curve;
  const double c = std::cos(angle), s = std::sin(angle);
  for (Vec2& p : out.samples) p = Vec2{c * p.x - s * p.y, s * p.x + c * p.y} + shift;
  return out;
}

PlanarCurve scale_curve(const PlanarCurve& curve, double factor) {
  if (!(factor > 0.0)) throw ParameterOutOfRangeError("scale factor must be positive");
  PlanarCurve out = curve;
  for (Vec2& p : out.samples) p = factor * p;
  out.domain = curve.domain * factor;
  return out;
}

std::size_t count_self_intersections(const PlanarCurve& curve) {
  const std::vector<Vec2>& p = curve.samples;
  const std::size_t nseg = p.size() - 1;
  if (nseg < 3) return 0;

  double max_len = 0.0;
  double min_x = p[0].x, min_y = p[0].y;
  for (std::size_t k = 0; k < nseg; ++k) {
    max_len = std::max(max_len, norm(p[k + 1] - p[k]));
    min_x = std::min(min_x, p[k].x);
    min_y = std::min(min_y, p[k].y);
  }
  const double cell = std::max(max_len, 1e-12);

  auto cell_key = [&](double x, double y) {
    auto cx = std::int64_t(std::floor((x - min_x) / cell));
    auto cy = std::int64_t(std::floor((y - min_y) / cell));
    return (cx << 32) ^ (cy & 0xffffffffLL);
  };

  std::unordered_map<std::int64_t, std::vector<std::uint32_t>> grid;
  grid.reserve(2 * nseg);
  auto visit_cells = [&](std::size_t k, auto&& fn) {
    double x0 = std::min(p[k].x, p[k + 1].x), x1 = std::max(p[k].x, p[k + 1].x);
    double y0 = std::min(p[k].y, p[k + 1].y), y1 = std::max(p[k].y, p[k + 1].y);
    for (double x = x0;; x += cell) {
      for (double y = y0;; y += cell) {
        fn(cell_key(x, y));
        if (y >= y1) break;
      }
      if (x >= x1) break;
    }
  };

  auto adjacent = [&](std::size_t i, std::size_t j) {
    if (i + 1 == j) return true;
    if (curve.closed && i == 0 && j + 1 == nseg) return true;
    return false;
  };

  std::unordered_set<std::uint64_t> tested;
  std::size_t count = 0;
  for (std::size_t k = 0; k < nseg; ++k) {
    std::vector<std::int64_t> keys;
    visit_cells(k, [&](std::int64_t key) { keys.push_back(key); });
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    for (std::int64_t key : keys) {
      for (std::uint32_t i : grid[key]) {
        if (adjacent(i, k)) continue;
        std::uint64_t pair_id = (std::uint64_t(i) << 32) | k;
        if (!tested.insert(pair_id).second) continue;
        Vec2 a = p[i], b = p[i + 1], c = p[k], d = p[k + 1];
        double d1 = orient(a, b, c), d2 = orient(a, b, d);
        double d3 = orient(c, d, a), d4 = orient(c, d, b);
        if (d1 * d2 < 0.0 && d3 * d4 < 0.0) ++count;
      }
      grid[key].push_back(std::uint32_t(k));
    }
  }
  return count;
}

double hausdorff_distance(const PlanarCurve& a, const PlanarCurve& b) {
  auto directed = [](const std::vector<Vec2>& from, const std::vector<Vec2>& to) {
    double worst = 0.0;
    for (const Vec2& p : from) {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k + 1 < to.size(); ++k)
        best = std::min(best, point_segment_distance(p, to[k], to[k + 1]));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(directed(a.samples, b.samples), directed(b.samples, a.samples));
}

PlanarCurve segment_curve(Vec2 p, Vec2 q, std::size_t n) {
  if (n < 2) throw ParameterOutOfRangeError("segment needs at least two samples");
  PlanarCurve out;
  out.param = ParamKind::arclength;
  out.domain = norm(q - p);
  out.samples.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    double t = double(k) / double(n - 1);
    out.samples[k] = p + t * (q - p);
  }
  validate_curve(out);
  return out;
}

PlanarCurve circle_curve(Vec2 center, double radius, std::size_t n) {
  if (n < 4) throw ParameterOutOfRangeError("circle needs at least four samples");
  if (!(radius > 0.0)) throw ParameterOutOfRangeError("radius must be positive");
  PlanarCurve out;
  out.param = ParamKind::arclength;
  out.domain = kTwoPi * radius;
  out.closed = true;
  out.samples.resize(n);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    double phi = kTwoPi * double(k) / double(n - 1);
    out.samples[k] = center + Vec2{radius * std::cos(phi), radius * std::sin(phi)};
  }
  out.samples.back() = out.samples.front();
  return out;
}

PlanarCurve ellipse_curve(Vec2 center, double a, double b, std::size_t n) {
  if (n < 4) throw ParameterOutOfRangeError("ellipse needs at least four samples");
  if (!(a > 0.0) || !(b > 0.0))
    throw ParameterOutOfRangeError("semi-axes must be positive");
  PlanarCurve dense;
  dense.param = ParamKind::arclength;  // placeholder until resampling
  dense.closed = true;
  std::size_t nd = std::max<std::size_t>(4 * n, 512);
  dense.samples.resize(nd);
  for (std::size_t k = 0; k + 1 < nd; ++k) {
    double phi = kTwoPi * double(k) / double(nd - 1);
    dense.samples[k] = center + Vec2{a * std::cos(phi), b * std::sin(phi)};
  }
  dense.samples.back() = dense.samples.front();
  dense.domain = polyline_length(dense.samples);
  return resample_arclength(dense, n);
}

}  // namespace curvelab
