// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "chcert/extended_real.hpp"
#include "chcert/weights.hpp"

namespace chcert {

/// Dyadic level points of W(t) = \int_a^t w: W(x_k) = 2^k for k < M, with
/// M = inf{k : W <= 2^k on (a,b)} (M = +inf when W is unbounded) and x_M = b.
struct DiscretizingSequence {
  Interval domain{0.0, 1.0};
  std::optional<int> M;        ///< empty means +inf
  int k_min = 0;               ///< first stored level
  int k_top = 0;               ///< last stored level: min(M, K_cap)
  std::vector<double> x;       ///< x[k - k_min] for k in [k_min, k_top]
  std::vector<double> W_at;    ///< W(x_k), same indexing
  ExtendedReal w_total;        ///< lim_{t->b} W(t)
  bool lower_truncated = true; ///< levels below k_min exist (always: the sequence starts at -inf)
  bool upper_truncated = false;///< M > K_cap
  bool window_shifted = false; ///< K_min was lowered because M - 1 < K_min
  double tol = 1e-8;

  bool M_finite() const { return M.has_value(); }
  double at(int k) const;
  /// Number of cells (x_k, x_{k+1}) for k in [k_min, k_top).
  int cells() const { return k_top - k_min; }
};

inline constexpr int kDefaultKMin = -40;
inline constexpr int kDefaultKCap = 40;

/// Throws PathologicalWeightError when W = +inf somewhere inside (a, b).
DiscretizingSequence discretizing_sequence(const WeightExpr& w, int k_min = kDefaultKMin, int k_cap = kDefaultKCap,
                                           double tol = 1e-8);

/// Throws PathologicalWeightError when W(t) = +inf for some interior t.
void check_not_pathological(const WeightExpr& w);

/// Bounds on \int W^alpha w h / \sum 2^{k(alpha+1)} h(x_k) for nonincreasing h,
/// from comparing each dyadic cell with the level values at its ends:
/// upper (2^{alpha+1} - 1)/(alpha+1), lower (1 - 2^{-(alpha+1)})/(alpha+1).
double int_equiv_lower(double alpha);
double int_equiv_upper(double alpha);

struct IntEquivReport {
  double lhs = 0.0;          ///< \int_{x_{k_min}}^{x_top} W^alpha w h
  double rhs = 0.0;          ///< \sum_{k=k_min}^{top-1} 2^{k(alpha+1)} h(x_k)
  double ratio = 0.0;        ///< lhs/rhs; 1 when both vanish
  double lower = 0.0;        ///< bracket, lower end already corrected for the truncated head cell
  double upper = 0.0;
  bool exact_zero = false;
  bool in_bracket = false;
};

/// h must be nonincreasing; sampled monotonicity is checked (PreconditionError).
IntEquivReport verify_int_equiv(const WeightExpr& w, const DiscretizingSequence& seq, double alpha,
                                const std::function<double(double)>& h, double tol = 1e-10,
                                const std::vector<double>& h_breakpoints = {});

}  // namespace chcert
