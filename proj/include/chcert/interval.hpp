// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <limits>
#include <string>

#include "chcert/errors.hpp"

namespace chcert {

/// Open interval (a, b) with a < b; either end may be infinite.
class Interval {
 public:
  Interval(double a, double b) : a_(a), b_(b) {
    if (std::isnan(a) || std::isnan(b) || !(a < b) || a == kPosInf || b == kNegInf)
      throw DomainError("Interval: require a < b, got (" + std::to_string(a) + ", " +
                        std::to_string(b) + ")");
  }

  double a() const { return a_; }
  double b() const { return b_; }
  bool left_finite() const { return std::isfinite(a_); }
  bool right_finite() const { return std::isfinite(b_); }
  bool bounded() const { return left_finite() && right_finite(); }
  bool contains(double t) const { return a_ < t && t < b_; }
  bool contains_closure(double t) const { return a_ <= t && t <= b_; }

  /// A finite interior point used as the starting point for scans.
  double anchor() const {
    if (bounded()) return a_ + 0.5 * (b_ - a_);
    if (left_finite()) return a_ + std::fmax(1.0, std::fabs(a_));
    if (right_finite()) return b_ - std::fmax(1.0, std::fabs(b_));
    return 0.0;
  }

  friend bool operator==(const Interval&, const Interval&) = default;

 private:
  static constexpr double kPosInf = std::numeric_limits<double>::infinity();
  static constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  double a_;
  double b_;
};

}  // namespace chcert
