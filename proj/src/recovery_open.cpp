#include "curvelab/recovery_open.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <utility>
#include <vector>

#include "block_detail.hpp"
#include "curvelab/errors.hpp"

namespace curvelab {
namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// Straight run or one block, measured along arclength; x0 is the window's
// left edge on the chord.
struct Piece {
  double len = 0.0;
  double x0 = 0.0;
  int sign = 0;  // 0 for a straight run
};

PlanarCurve sample_pieces(const std::vector<Piece>& pieces, double L,
                          const detail::BlockShape& plus,
                          const detail::BlockShape& minus, std::size_t n) {
  std::vector<double> cum(pieces.size() + 1, 0.0);
  for (std::size_t i = 0; i < pieces.size(); ++i)
    cum[i + 1] = cum[i] + pieces[i].len;
  const double total = cum.back();

  PlanarCurve curve;
  curve.param = ParamKind::constant_speed;
  curve.domain = L;
  curve.speed = total / L;
  curve.closed = false;
  curve.samples.resize(n);
  const double h = total / double(n - 1);
  std::size_t j = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = double(i) * h;
    while (j + 1 < pieces.size() && t > cum[j + 1]) ++j;
    const Piece& piece = pieces[j];
    const double dt = std::clamp(t - cum[j], 0.0, piece.len);
    if (piece.sign == 0) {
      curve.samples[i] = {piece.x0 + dt, 0.0};
    } else {
      const detail::BlockShape& shape = piece.sign > 0 ? plus : minus;
      const Vec2 local = shape.at(dt).point;
      curve.samples[i] = {piece.x0 + local.x, local.y};
    }
  }
  return curve;
}

}  // namespace

KeyBlock build_key_block(double epsilon, double a, int sign, std::size_t n) {
  detail::check_block_params(epsilon, a, sign, n);
  const detail::BlockShape shape(epsilon, a, sign);

  KeyBlock block;
  block.epsilon = epsilon;
  block.a = a;
  block.delta = shape.delta();
  block.sign = sign;
  block.radius = shape.radius();
  block.arc_angle = shape.arc_angle();
  block.arc_length = shape.arc_length();
  block.p = {0.0, 0.0};
  block.q = {shape.chord(), 0.0};

  PlanarCurve curve;
  curve.param = ParamKind::arclength;
  curve.domain = shape.total_length();
  curve.speed = 1.0;
  curve.closed = false;
  curve.samples.resize(n);
  const double h = curve.domain / double(n - 1);
  for (std::size_t i = 0; i < n; ++i)
    curve.samples[i] = shape.at(double(i) * h).point;
  block.samples = std::move(curve);
  block.energy_terms = key_block_energy(block);
  return block;
}

BlockTerms key_block_energy(const KeyBlock& block) {
  const double root_eps = std::sqrt(block.epsilon);
  const double u = block.delta / std::sqrt(2.0 * block.epsilon);
  BlockTerms terms;
  terms.arc_excess =
      2.0 * block.radius * (block.arc_angle - std::sin(block.arc_angle)) /
      root_eps;
  terms.core_transition = kSigma * std::tanh(u);
  terms.arc_bending = 2.0 * root_eps * block.arc_angle / block.radius;
  return terms;
}

OpenRecovery build_open_recovery(double L, const AtomicIntegerMeasure& omega,
                                 double epsilon, double a, std::size_t n) {
  if (!(L > 0.0))
    throw ParameterOutOfRangeError(
        "build_open_recovery: chord length must be positive");
  if (n < 9)
    throw ParameterOutOfRangeError(
        "build_open_recovery: need at least 9 samples");
  validate_atomic(omega);
  if (std::abs(omega.domain - L) > 1e-9 * L)
    throw LengthMismatchError(
        "build_open_recovery: record domain differs from the chord length");

  OpenRecovery rec;
  rec.block = build_key_block(epsilon, a, +1);
  const double delta = rec.block.delta;
  const double chord = rec.block.chord();
  const double block_len = rec.block.length();
  rec.window_slack = 2.0 * delta - chord;

  for (const auto& [position, winding] : omega.atoms) {
    if (winding == 0) continue;
    const int m = std::abs(winding);
    const int sgn = winding > 0 ? 1 : -1;
    for (int k = 0; k < m; ++k) {
      rec.centers.push_back(position +
                            (double(k) - 0.5 * double(m - 1)) * 2.0 * delta);
      rec.signs.push_back(sgn);
    }
  }
  std::vector<std::size_t> order(rec.centers.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) {
    return rec.centers[l] < rec.centers[r];
  });
  {
    std::vector<double> centers;
    std::vector<int> signs;
    for (std::size_t idx : order) {
      centers.push_back(rec.centers[idx]);
      signs.push_back(rec.signs[idx]);
    }
    rec.centers = std::move(centers);
    rec.signs = std::move(signs);
  }

  for (std::size_t h = 0; h + 1 < rec.centers.size(); ++h)
    if (rec.centers[h + 1] - rec.centers[h] < 2.0 * delta * (1.0 - 1e-9))
      throw BlocksDoNotFitError(
          "build_open_recovery: adjacent windows closer than the block spacing");
  for (double center : rec.centers) {
    const double lo = center - 0.5 * chord;
    const double hi = center + 0.5 * chord;
    if (!(lo > 0.0) || !(hi < L))
      throw BlocksDoNotFitError(
          "build_open_recovery: window leaves the open chord");
    rec.windows.emplace_back(lo, hi);
  }

  const detail::BlockShape plus(epsilon, a, +1);
  const detail::BlockShape minus(epsilon, a, -1);
  std::vector<Piece> pieces;
  double cursor = 0.0;
  for (std::size_t h = 0; h < rec.windows.size(); ++h) {
    const auto [lo, hi] = rec.windows[h];
    if (lo > cursor) pieces.push_back({lo - cursor, cursor, 0});
    pieces.push_back({block_len, lo, rec.signs[h]});
    cursor = hi;
  }
  if (L > cursor) pieces.push_back({L - cursor, cursor, 0});
  if (pieces.empty()) pieces.push_back({L, 0.0, 0});

  rec.curve = sample_pieces(pieces, L, plus, minus, n);
  return rec;
}

PlanarCurve circle_loop_baseline(double L, double epsilon, std::size_t n) {
  if (!(L > 0.0))
    throw ParameterOutOfRangeError(
        "circle_loop_baseline: chord length must be positive");
  if (!(epsilon > 0.0) || !(std::sqrt(epsilon) < 0.1 * L))
    throw ParameterOutOfRangeError(
        "circle_loop_baseline: loop radius must stay below L/10");
  if (n < 9)
    throw ParameterOutOfRangeError(
        "circle_loop_baseline: need at least 9 samples");

  const double rho = std::sqrt(epsilon);
  const double loop = kTwoPi * rho;
  const double total = L + loop;
  const double half = 0.5 * L;

  PlanarCurve curve;
  curve.param = ParamKind::constant_speed;
  curve.domain = L;
  curve.speed = total / L;
  curve.closed = false;
  curve.samples.resize(n);
  const double h = total / double(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = double(i) * h;
    if (t <= half) {
      curve.samples[i] = {t, 0.0};
    } else if (t <= half + loop) {
      const double phi = (t - half) / rho;
      const double s = std::sin(0.5 * phi);
      curve.samples[i] = {half + rho * std::sin(phi), 2.0 * rho * s * s};
    } else {
      curve.samples[i] = {t - loop, 0.0};
    }
  }
  return curve;
}

}  // namespace curvelab
