// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

namespace chcert {

/// Finite run of positive terms indexed first_index .. first_index + size - 1.
/// With infinite_lower set the run stands for a sequence starting at -inf,
/// truncated at first_index; checks then demand the deepest stored term be
/// negligible (relative 1e-6) or throw TruncationError.
struct PositiveSequence {
  int first_index = 0;
  std::vector<double> values;
  bool infinite_lower = false;

  int last_index() const { return first_index + int(values.size()) - 1; }
  std::size_t size() const { return values.size(); }
};

inline constexpr double kTruncationThreshold = 1e-6;
inline constexpr int kTruncationDepth = 40;

/// inf_k a_{k+1}/a_k; the sequence is strongly increasing iff the result exceeds 1.
double strong_increase_ratio(const std::vector<double>& seq);

struct IdentityCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double rel_diff = 0.0;
};

/// Summation by parts: sum c_k b_k against
/// sum_{k>N} (b_k - b_{k-1}) sum_{i>=k} c_i + (sum c) b_N.
IdentityCheck abel_identity_check(const std::vector<double>& c, const std::vector<double>& b);

struct Bracket {
  double lower = 1.0;
  double upper = 1.0;
};

struct EquivalenceCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 1.0;  ///< lhs/rhs, 1 when both vanish
  Bracket bracket;
  bool in_bracket = true;
};

/// Bracket for sum a_k (sum_{i>=k} a_i)^s b_k over its tail-power rewriting:
/// [1/(s+1), 1], from a_i S_i^s lying between (S_i^{s+1} - S_{i+1}^{s+1})/(s+1)
/// and S_i^{s+1} - S_{i+1}^{s+1}.
Bracket tail_power_bracket(double s);

/// lhs = sum a_k (sum_{i>=k} a_i)^s b_k,
/// rhs = sum_{k>N} (b_k - b_{k-1}) (sum_{i>=k} a_i)^{s+1} + (sum a)^{s+1} b_N.
EquivalenceCheck tail_power_equivalence(const PositiveSequence& a, const PositiveSequence& b, double s);

enum class TailVariant { SupSup, SumSum, SumSup, SupSum };

std::string to_string(TailVariant v);
TailVariant tail_variant_from_string(const std::string& s);

/// Ratio bracket of lhs/rhs for weights rho with inf rho_{k+1}/rho_k = D:
///   sup-sup  [1, 1]
///   sum-sum  [1, D/(D-1)] for beta <= 1; for beta > 1 the Hoelder split
///            min_theta (1 - D^{-theta/(beta-1)})^{-(beta-1)} (1 - D^{-(1-theta)})^{-1}
///   sum-sup  [1, D/(D-1)]
///   sup-sum  [1, (1 - D^{-1/beta})^{-beta}]
Bracket tail_comparison_bracket(TailVariant v, double D, double beta);

/// lhs uses the tails sum_{i>=k} a_i (or sup_{i>=k} a_i), rhs uses a_k alone.
/// Throws PreconditionError when rho is not nondecreasing (sup-sup) or not
/// strongly increasing (other variants).
EquivalenceCheck tail_comparison_check(TailVariant v, const std::vector<double>& rho, const std::vector<double>& a,
                               double beta);

}  // namespace chcert
