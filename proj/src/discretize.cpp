// SPDX-License-Identifier: Apache-2.0
#include "chcert/discretize.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "chcert/errors.hpp"
#include "chcert/quadrature.hpp"
#include "chcert/roots.hpp"
#include "chcert/supremum.hpp"

namespace chcert {

double DiscretizingSequence::at(int k) const {
  if (k < k_min || k > k_top) throw DomainError("discretizing sequence: level " + std::to_string(k) + " not stored");
  return x[std::size_t(k - k_min)];
}

void check_not_pathological(const WeightExpr& w) {
  // Singularities sit only at piece ends, so W is infinite somewhere inside
  // (a, b) iff it is infinite inside the last piece.
  const auto& last = w.pieces().back();
  double t;
  if (std::isfinite(last.lo) && std::isfinite(last.hi)) t = last.lo + 0.5 * (last.hi - last.lo);
  else t = Interval(last.lo, last.hi).anchor();
  if (primitive_W(w, t).is_infinite())
    throw PathologicalWeightError("W(t) = +inf inside the interval: the outer weight is not locally integrable at a");
}

DiscretizingSequence discretizing_sequence(const WeightExpr& w, int k_min, int k_cap, double tol) {
  if (k_min > k_cap) throw DomainError("discretizing sequence: K_min > K_cap");
  if (!(tol > 0.0)) throw DomainError("discretizing sequence: tolerance must be positive");
  check_not_pathological(w);

  DiscretizingSequence seq;
  seq.domain = w.domain();
  seq.tol = tol;
  const double a = w.domain().a(), b = w.domain().b();
  seq.w_total = w.integral(a, b);
  if (seq.w_total.is_finite()) {
    int e;
    const double m = std::frexp(seq.w_total.value(), &e);
    seq.M = (m == 0.5) ? e - 1 : e;
    if (*seq.M - 1 < k_min) {
      k_min = *seq.M - 1 + k_min;
      seq.window_shifted = true;
    }
  }
  seq.k_min = k_min;
  seq.k_top = seq.M ? std::min(*seq.M, k_cap) : k_cap;
  seq.upper_truncated = !seq.M || *seq.M > k_cap;
  if (seq.k_top < seq.k_min) seq.k_top = seq.k_min;

  auto W = [&](double t) { return primitive_W(w, t).value(); };
  double hint = kInf;
  for (int k = seq.k_min; k <= seq.k_top; ++k) {
    if (seq.M && k == *seq.M) {
      seq.x.push_back(b);
      seq.W_at.push_back(seq.w_total.value());
      break;
    }
    const double target = std::ldexp(1.0, k);
    const double xk = find_root_increasing(W, target, w.domain(), tol, hint);
    if (!seq.x.empty() && !(xk > seq.x.back())) {
      std::ostringstream os;
      os.precision(17);
      os << "discretizing sequence: levels not increasing at k=" << k << " (x=" << xk << ")";
      throw NumericalError(os.str());
    }
    seq.x.push_back(xk);
    seq.W_at.push_back(W(xk));
    hint = xk;
  }
  return seq;
}

double int_equiv_lower(double alpha) { return -std::expm1(-(alpha + 1.0) * std::log(2.0)) / (alpha + 1.0); }
double int_equiv_upper(double alpha) { return std::expm1((alpha + 1.0) * std::log(2.0)) / (alpha + 1.0); }

IntEquivReport verify_int_equiv(const WeightExpr& w, const DiscretizingSequence& seq, double alpha,
                                const std::function<double(double)>& h, double tol,
                                const std::vector<double>& h_breakpoints) {
  if (!(alpha >= 0.0)) throw DomainError("verify_int_equiv: alpha must be >= 0");
  if (seq.x.size() < 2) throw DomainError("verify_int_equiv: need at least one stored cell");
  const double lo = seq.x.front(), hi = seq.x.back();
  const Interval range(lo, hi);

  // Sampled monotonicity check.
  {
    const auto g = composite_grid(range, 512, h_breakpoints);
    double prev = kInf;
    for (double t : g) {
      const double y = h(t);
      if (!(y >= 0.0)) throw PreconditionError("verify_int_equiv: h must be nonnegative");
      if (y > prev * (1.0 + 1e-12) + 1e-300)
        throw PreconditionError("verify_int_equiv: h is not nonincreasing");
      prev = y;
    }
  }

  IntEquivReport rep;
  rep.lower = int_equiv_lower(alpha);
  rep.upper = int_equiv_upper(alpha);

  // Right-hand side over k = k_min .. top-1.
  const int top = seq.k_min + int(seq.x.size()) - 1;
  double head = 0.0;
  for (int k = seq.k_min; k < top; ++k) {
    const double xk = seq.at(k);
    const double term = ext::mul(std::exp2(double(k) * (alpha + 1.0)), h(xk));
    if (k == seq.k_min) head = term;
    rep.rhs += term;
  }

  const double a = w.domain().a();
  auto f = [&](double t) {
    const double ht = h(t);
    if (ht == 0.0) return 0.0;
    const double Wt = w.integral(a, t).value();
    return ext::pow(Wt, alpha) * w(t) * ht;
  };
  QuadratureOptions o;
  o.tol = tol;
  o.breakpoints = h_breakpoints;
  for (double t : w.breakpoints()) o.breakpoints.push_back(t);
  for (std::size_t i = 1; i + 1 < seq.x.size(); ++i) o.breakpoints.push_back(seq.x[i]);
  std::sort(o.breakpoints.begin(), o.breakpoints.end());
  o.breakpoints.erase(std::unique(o.breakpoints.begin(), o.breakpoints.end()), o.breakpoints.end());
  rep.lhs = integrate(f, range, o).value.value();

  if (rep.lhs == 0.0 && rep.rhs == 0.0) {
    rep.exact_zero = true;
    rep.ratio = 1.0;
    rep.in_bracket = true;
    return rep;
  }
  rep.ratio = ext::div(rep.lhs, rep.rhs);
  rep.lower *= std::max(0.0, 1.0 - head / rep.rhs);
  const double slack = 10.0 * tol;
  rep.in_bracket = rep.ratio >= rep.lower * (1.0 - slack) && rep.ratio <= rep.upper * (1.0 + slack);
  return rep;
}

}  // namespace chcert
