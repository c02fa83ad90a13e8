// SPDX-License-Identifier: Apache-2.0
#include "chcert/discrete_lemmas.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "chcert/errors.hpp"
#include "chcert/extended_real.hpp"

namespace chcert {
namespace {

double rel_diff(double x, double y) {
  if (x == y) return 0.0;
  return std::fabs(x - y) / std::max(std::fabs(x), std::fabs(y));
}

EquivalenceCheck finish(double lhs, double rhs, Bracket br) {
  EquivalenceCheck out;
  out.lhs = lhs;
  out.rhs = rhs;
  out.bracket = br;
  out.ratio = (lhs == 0.0 && rhs == 0.0) ? 1.0 : ext::div(lhs, rhs);
  const double slack = 1e-12;
  out.in_bracket = out.ratio >= br.lower * (1.0 - slack) && out.ratio <= br.upper * (1.0 + slack);
  return out;
}

void require_nondecreasing(const std::vector<double>& b, const char* what) {
  for (std::size_t i = 1; i < b.size(); ++i)
    if (b[i] < b[i - 1]) throw PreconditionError(std::string(what) + " must be nondecreasing");
}

void require_nonnegative(const std::vector<double>& x, const char* what) {
  for (double v : x)
    if (!(v >= 0.0) || std::isinf(v)) throw PreconditionError(std::string(what) + " must be finite and nonnegative");
}

// Suffix sums sum_{i>=k} x_i.
std::vector<double> tails(const std::vector<double>& x) {
  std::vector<double> t(x.size());
  double s = 0.0;
  for (std::size_t i = x.size(); i-- > 0;) {
    s += x[i];
    t[i] = s;
  }
  return t;
}

}  // namespace

double strong_increase_ratio(const std::vector<double>& seq) {
  if (seq.size() < 2) throw PreconditionError("strong_increase_ratio: need at least two terms");
  double D = kInf;
  for (std::size_t k = 0; k + 1 < seq.size(); ++k) {
    if (!(seq[k] > 0.0)) throw PreconditionError("strong_increase_ratio: terms must be positive");
    D = std::min(D, seq[k + 1] / seq[k]);
  }
  return D;
}

IdentityCheck abel_identity_check(const std::vector<double>& c, const std::vector<double>& b) {
  if (c.size() != b.size() || c.empty()) throw PreconditionError("abel_identity_check: sequences must share an index range");
  require_nonnegative(c, "c");
  require_nonnegative(b, "b");
  require_nondecreasing(b, "b");
  IdentityCheck out;
  for (std::size_t k = 0; k < c.size(); ++k) out.lhs += c[k] * b[k];
  const auto T = tails(c);
  for (std::size_t k = 1; k < c.size(); ++k) out.rhs += (b[k] - b[k - 1]) * T[k];
  out.rhs += T[0] * b[0];
  out.rel_diff = rel_diff(out.lhs, out.rhs);
  return out;
}

Bracket tail_power_bracket(double s) {
  if (!(s > 0.0)) throw DomainError("tail_power_bracket: s must be positive");
  return {1.0 / (s + 1.0), 1.0};
}

EquivalenceCheck tail_power_equivalence(const PositiveSequence& a, const PositiveSequence& b, double s) {
  if (a.size() != b.size() || a.first_index != b.first_index || a.values.empty())
    throw PreconditionError("tail_power_equivalence: sequences must share an index range");
  require_nonnegative(a.values, "a");
  require_nonnegative(b.values, "b");
  require_nondecreasing(b.values, "b");
  const auto S = tails(a.values);
  const std::size_t n = a.size();
  double lhs = 0.0, rhs = 0.0;
  std::vector<double> lhs_terms(n);
  for (std::size_t k = 0; k < n; ++k) {
    lhs_terms[k] = a.values[k] * std::pow(S[k], s) * b.values[k];
    lhs += lhs_terms[k];
  }
  for (std::size_t k = 1; k < n; ++k) rhs += (b.values[k] - b.values[k - 1]) * std::pow(S[k], s + 1.0);
  rhs += std::pow(S[0], s + 1.0) * b.values[0];

  if (a.infinite_lower && n > 1) {
    const bool lhs_ok = lhs == 0.0 || lhs_terms[0] < kTruncationThreshold * lhs;
    const bool mass_ok = S[0] == 0.0 || a.values[0] < kTruncationThreshold * S[0];
    if (!lhs_ok || !mass_ok)
      throw TruncationError("tail_power_equivalence: deepest stored term is not negligible; extend the truncation");
  }
  return finish(lhs, rhs, tail_power_bracket(s));
}

std::string to_string(TailVariant v) {
  switch (v) {
    case TailVariant::SupSup: return "sup-sup";
    case TailVariant::SumSum: return "sum-sum";
    case TailVariant::SumSup: return "sum-sup";
    case TailVariant::SupSum: return "sup-sum";
  }
  return "?";
}

TailVariant tail_variant_from_string(const std::string& s) {
  if (s == "sup-sup") return TailVariant::SupSup;
  if (s == "sum-sum") return TailVariant::SumSum;
  if (s == "sum-sup") return TailVariant::SumSup;
  if (s == "sup-sum") return TailVariant::SupSum;
  throw DomainError("unknown lemma variant '" + s + "'");
}

Bracket tail_comparison_bracket(TailVariant v, double D, double beta) {
  if (!(beta > 0.0)) throw DomainError("tail_comparison_bracket: beta must be positive");
  if (v == TailVariant::SupSup) return {1.0, 1.0};
  if (!(D > 1.0)) throw PreconditionError("tail_comparison_bracket: D must exceed 1");
  if (std::isinf(D)) return {1.0, 1.0};
  const double geo = D / (D - 1.0);
  switch (v) {
    case TailVariant::SumSup: return {1.0, geo};
    case TailVariant::SupSum: return {1.0, std::pow(-std::expm1(-std::log(D) / beta), -beta)};
    case TailVariant::SumSum: {
      if (beta <= 1.0) return {1.0, geo};
      const double lnD = std::log(D), bm = beta - 1.0;
      auto c = [&](double th) {
        return std::pow(-std::expm1(-th * lnD / bm), -bm) / (-std::expm1(-(1.0 - th) * lnD));
      };
      // The product is log-convex in theta; a golden-section search on a fixed
      // bracket is enough and keeps the fixture deterministic.
      double lo = 1e-9, hi = 1.0 - 1e-9;
      const double g = 0.5 * (std::sqrt(5.0) - 1.0);
      double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
      double f1 = c(x1), f2 = c(x2);
      for (int i = 0; i < 200; ++i) {
        if (f1 < f2) {
          hi = x2;
          x2 = x1;
          f2 = f1;
          x1 = hi - g * (hi - lo);
          f1 = c(x1);
        } else {
          lo = x1;
          x1 = x2;
          f1 = f2;
          x2 = lo + g * (hi - lo);
          f2 = c(x2);
        }
      }
      return {1.0, std::min(f1, f2) * (1.0 + 1e-9)};
    }
    default: break;
  }
  return {1.0, 1.0};
}

EquivalenceCheck tail_comparison_check(TailVariant v, const std::vector<double>& rho, const std::vector<double>& a,
                               double beta) {
  if (rho.size() != a.size() || rho.empty()) throw PreconditionError("tail_comparison_check: sequences must share an index range");
  require_nonnegative(a, "a");
  for (double r : rho)
    if (!(r > 0.0) || std::isinf(r)) throw PreconditionError("tail_comparison_check: rho must be positive and finite");
  double D = kInf;
  if (rho.size() >= 2) D = strong_increase_ratio(rho);
  if (v == TailVariant::SupSup) {
    require_nondecreasing(rho, "rho");
  } else if (!(D > 1.0)) {
    throw PreconditionError("tail_comparison_check: rho must be strongly increasing for " + to_string(v));
  }
  const std::size_t n = a.size();
  double lhs = 0.0, rhs = 0.0;
  switch (v) {
    case TailVariant::SupSup: {
      double m = 0.0;
      for (std::size_t k = n; k-- > 0;) {
        m = std::max(m, a[k]);
        lhs = std::max(lhs, rho[k] * m);
        rhs = std::max(rhs, rho[k] * a[k]);
      }
      break;
    }
    case TailVariant::SumSum: {
      const auto S = tails(a);
      for (std::size_t k = 0; k < n; ++k) {
        lhs += rho[k] * std::pow(S[k], beta);
        rhs += rho[k] * std::pow(a[k], beta);
      }
      break;
    }
    case TailVariant::SumSup: {
      double m = 0.0;
      std::vector<double> sup_tail(n);
      for (std::size_t k = n; k-- > 0;) sup_tail[k] = m = std::max(m, a[k]);
      for (std::size_t k = 0; k < n; ++k) {
        lhs += rho[k] * sup_tail[k];
        rhs += rho[k] * a[k];
      }
      break;
    }
    case TailVariant::SupSum: {
      const auto S = tails(a);
      for (std::size_t k = 0; k < n; ++k) {
        lhs = std::max(lhs, rho[k] * std::pow(S[k], beta));
        rhs = std::max(rhs, rho[k] * std::pow(a[k], beta));
      }
      break;
    }
  }
  return finish(lhs, rhs, tail_comparison_bracket(v, D, beta));
}

}  // namespace chcert
