// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <compare>
#include <limits>
#include <stdexcept>
#include <string>

namespace chcert {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Degenerate-quotient conventions used throughout:
//   1/inf = 0*inf = inf/inf = 0/0 = 0.
// The helpers below operate on plain doubles so inner loops stay cheap.
namespace ext {

inline double mul(double x, double y) {
  if (x == 0.0 || y == 0.0) return 0.0;
  return x * y;
}

inline double div(double x, double y) {
  if (x == 0.0) return 0.0;
  if (std::isinf(x) && std::isinf(y)) return 0.0;
  if (std::isinf(y)) return 0.0;
  if (y == 0.0) return kInf;
  return x / y;
}

/// x^e for x >= 0 (possibly +inf) and e > 0.
inline double pow(double x, double e) {
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return kInf;
  return std::pow(x, e);
}

}  // namespace ext

/// A real number or +infinity. Never NaN, never -infinity.
class ExtendedReal {
 public:
  constexpr ExtendedReal() = default;
  ExtendedReal(double v) : v_(v) {  // NOLINT(google-explicit-constructor)
    if (std::isnan(v) || v == -kInf)
      throw std::domain_error("ExtendedReal: NaN or -inf is not representable");
  }

  static ExtendedReal infinity() { return ExtendedReal(kInf); }

  bool is_infinite() const { return std::isinf(v_); }
  bool is_finite() const { return !is_infinite(); }
  double value() const { return v_; }
  explicit operator double() const { return v_; }

  std::string to_string() const;

  friend ExtendedReal operator+(ExtendedReal x, ExtendedReal y) { return x.v_ + y.v_; }
  friend ExtendedReal operator*(ExtendedReal x, ExtendedReal y) { return ext::mul(x.v_, y.v_); }
  friend ExtendedReal operator/(ExtendedReal x, ExtendedReal y) { return ext::div(x.v_, y.v_); }
  friend bool operator==(ExtendedReal x, ExtendedReal y) { return x.v_ == y.v_; }
  friend std::partial_ordering operator<=>(ExtendedReal x, ExtendedReal y) { return x.v_ <=> y.v_; }

 private:
  double v_ = 0.0;
};

inline ExtendedReal pow(ExtendedReal x, double e) { return ext::pow(x.value(), e); }
inline ExtendedReal max(ExtendedReal x, ExtendedReal y) { return x < y ? y : x; }

}  // namespace chcert
