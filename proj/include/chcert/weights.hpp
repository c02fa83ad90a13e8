// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "chcert/extended_real.hpp"
#include "chcert/interval.hpp"

namespace chcert {

enum class AtomKind { Constant, Power, PowerLog, Exponential };

std::string to_string(AtomKind kind);

/// One analytic building block of a weight, with d = |t - center|:
///   Constant     c
///   Power        c d^alpha
///   PowerLog     c d^alpha |log d|^beta
///   Exponential  c e^(gamma t)
struct Atom {
  AtomKind kind = AtomKind::Constant;
  double c = 1.0;
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double center = 0.0;

  double operator()(double t) const;
  /// Limit of the atom as t approaches `t` from inside (t may be infinite or a singular point).
  double limit(double t) const;
  Atom pow(double kappa) const;
  Atom reflected() const;

  friend bool operator==(const Atom&, const Atom&) = default;
};

struct Piece {
  double lo;
  double hi;
  Atom atom;
  friend bool operator==(const Piece&, const Piece&) = default;
};

/// A positive weight on an interval, given as a partition into pieces each
/// carrying one atom. Immutable after construction.
class WeightExpr {
 public:
  WeightExpr(Interval domain, std::vector<Piece> pieces);

  static WeightExpr constant(Interval domain, double c);
  static WeightExpr power(Interval domain, double c, double alpha, double center = 0.0);
  static WeightExpr power_log(Interval domain, double c, double alpha, double beta, double center = 0.0);
  static WeightExpr exponential(Interval domain, double c, double gamma);
  /// Piecewise constant: values.size() == breaks.size() + 1.
  static WeightExpr tabulated(Interval domain, const std::vector<double>& breaks, const std::vector<double>& values);

  const Interval& domain() const { return domain_; }
  const std::vector<Piece>& pieces() const { return pieces_; }
  /// Interior piece boundaries.
  std::vector<double> breakpoints() const;

  /// Value at an interior t (right-continuous at breakpoints). Throws DomainError outside (a, b).
  double eval(double t) const;
  double operator()(double t) const { return eval(t); }

  /// \int_lo^hi of the weight for a <= lo < hi <= b; +inf when divergent.
  /// Closed form for constant, power and exponential atoms; quadrature for power-log.
  ExtendedReal integral(double lo, double hi) const;

  /// sup of the weight over (lo, hi), exact within the atom class.
  ExtendedReal sup_on(double lo, double hi) const;

  WeightExpr pow(double kappa) const;
  WeightExpr scaled(double lambda) const;
  /// t -> w(-t) on (-b, -a).
  WeightExpr reflected() const;

  friend bool operator==(const WeightExpr&, const WeightExpr&) = default;

 private:
  Interval domain_;
  std::vector<Piece> pieces_;
};

/// W(t) = \int_a^t w.
ExtendedReal primitive_W(const WeightExpr& w, double t);
/// U(t) = \int_t^b u.
ExtendedReal tail_U(const WeightExpr& u, double t);

/// V_p over a subinterval: (\int v^{1/(1-p)})^{(1-p)/p} for p < 1, sup v for p = 1.
///
/// For p < 1 the powered weight v^{1/(1-p)} is built once, so every query is
/// a single closed-form primitive difference.
class VpEvaluator {
 public:
  VpEvaluator(const WeightExpr& v, double p);

  double p() const { return p_; }
  /// V_p(x, t) for a <= x < t <= b.
  double operator()(double x, double t) const;
  /// V_p(x, t)^{p/(1-p)} = \int_x^t v^{1/(1-p)}; only for p < 1.
  double mass(double x, double t) const;

 private:
  double p_;
  WeightExpr v_;
  std::optional<WeightExpr> powered_;
};

ExtendedReal compute_Vp(const WeightExpr& v, double p, Interval sub);

struct WeightTriple {
  WeightExpr u;
  WeightExpr v;
  WeightExpr w;

  WeightTriple(WeightExpr u_, WeightExpr v_, WeightExpr w_);
  const Interval& domain() const { return u.domain(); }
  /// Union of the breakpoints of all three weights, sorted.
  std::vector<double> breakpoints() const;
};

}  // namespace chcert
