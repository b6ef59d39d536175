#pragma once

// Exact closed-form sampling of a single-turn insertion block: circular
// connector arc, borderline core on [-delta, delta], circular connector arc.
// The connector radius equals the core end radius, so curvature is continuous
// at the inner junctions; both endpoints sit on the x-axis with horizontal
// tangents and the lifting climbs monotonically from 0 to 2*pi*sign.

#include <cmath>
#include <cstddef>

#include "curvelab/elastica.hpp"
#include "curvelab/errors.hpp"
#include "curvelab/geometry.hpp"

namespace curvelab::detail {

inline void check_block_params(double epsilon, double a, int sign, std::size_t n) {
  if (!(epsilon > 0.0) || epsilon > 1.0)
    throw ParameterOutOfRangeError("key block: epsilon must lie in (0, 1]");
  if (!(a > 0.25) || !(a < 0.5))
    throw ParameterOutOfRangeError(
        "key block: width exponent must lie strictly between 1/4 and 1/2");
  if (sign != 1 && sign != -1)
    throw ParameterOutOfRangeError("key block: sign must be +1 or -1");
  if (n < 9)
    throw ParameterOutOfRangeError("key block: need at least 9 samples");
}

struct BlockPoint {
  Vec2 point;
  double angle = 0.0;
  double curvature = 0.0;
};

class BlockShape {
 public:
  BlockShape(double epsilon, double a, int sign)
      : epsilon_(epsilon), sign_(sign) {
    delta_ = std::pow(epsilon, a);
    const double root2eps = std::sqrt(2.0 * epsilon);
    const double u = delta_ / root2eps;
    const double emu = std::exp(-u);
    beta_ = 4.0 * std::atan(emu);
    const double sech = 2.0 * emu / (1.0 + emu * emu);
    radius_ = std::sqrt(epsilon) / (std::sqrt(2.0) * sech);
    arc_len_ = radius_ * beta_;
    total_len_ = 2.0 * delta_ + 2.0 * arc_len_;

    const double half_sin = std::sin(0.5 * beta_);
    arc_end_ = {radius_ * std::sin(beta_), 2.0 * radius_ * half_sin * half_sin};
    const BorderlineSample left = borderline_sample(epsilon, -delta_);
    core_shift_ = arc_end_ - left.point;
    const BorderlineSample right = borderline_sample(epsilon, delta_);
    const Vec2 core_end = right.point + core_shift_;
    tail_center_ = core_end + radius_ * Vec2{std::sin(beta_), std::cos(beta_)};
    chord_ = core_end.x + radius_ * std::sin(beta_);
  }

  double epsilon() const { return epsilon_; }
  double delta() const { return delta_; }
  int sign() const { return sign_; }
  double radius() const { return radius_; }
  double arc_angle() const { return beta_; }
  double arc_length() const { return arc_len_; }
  double total_length() const { return total_len_; }
  double chord() const { return chord_; }

  // s in [0, total_length()]; slight overshoot from grid roundoff continues
  // the outer arcs smoothly.
  BlockPoint at(double s) const {
    BlockPoint out;
    if (s <= arc_len_) {
      const double th = s / radius_;
      const double half = std::sin(0.5 * th);
      out.point = {radius_ * std::sin(th), 2.0 * radius_ * half * half};
      out.angle = th;
      out.curvature = 1.0 / radius_;
    } else if (s <= arc_len_ + 2.0 * delta_) {
      const double t = s - arc_len_ - delta_;
      const BorderlineSample core = borderline_sample(epsilon_, t);
      out.point = core.point + core_shift_;
      out.angle = core.angle;
      out.curvature = core.curvature;
    } else {
      const double th = kTwoPi - beta_ + (s - arc_len_ - 2.0 * delta_) / radius_;
      out.point = tail_center_ + radius_ * Vec2{std::sin(th), -std::cos(th)};
      out.angle = th;
      out.curvature = 1.0 / radius_;
    }
    if (sign_ < 0) {
      out.point.y = -out.point.y;
      out.angle = -out.angle;
      out.curvature = -out.curvature;
    }
    return out;
  }

 private:
  static constexpr double kTwoPi = 6.283185307179586476925286766559;

  double epsilon_;
  int sign_;
  double delta_ = 0.0;
  double beta_ = 0.0;
  double radius_ = 0.0;
  double arc_len_ = 0.0;
  double total_len_ = 0.0;
  double chord_ = 0.0;
  Vec2 arc_end_;
  Vec2 core_shift_;
  Vec2 tail_center_;
};

}  // namespace curvelab::detail
