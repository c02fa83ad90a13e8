// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "chcert/discretize.hpp"
#include "chcert/extended_real.hpp"
#include "chcert/quadrature.hpp"
#include "chcert/supremum.hpp"
#include "chcert/weights.hpp"

namespace chcert {

struct Parameters {
  double p = 1.0;
  double q = 1.0;
  double r = 1.0;

  /// p in (0, 1], q and r positive and finite.
  void validate() const;
  friend bool operator==(const Parameters&, const Parameters&) = default;
};

/// I: r >= 1, q >= 1;  II: r >= 1, q < 1;  III: r < 1, q >= 1;  IV: r < 1, q < 1.
enum class Regime { I, II, III, IV };

Regime classify_regime(const Parameters& params);
std::string to_string(Regime r);
/// Indices (1-based) of the two continuum constants whose sum estimates the best constant.
std::array<int, 2> regime_pair(Regime r);

struct ConditionOptions {
  double tol = 1e-8;
  std::size_t nodes = 2048;      ///< supremum grid and tail-integral tables
  std::size_t cell_nodes = 256;  ///< per-cell suprema of the discrete constants
  int k_min = kDefaultKMin;
  int k_cap = kDefaultKCap;
  DivergencePolicy divergence{};
};

struct ConstantValue {
  ExtendedReal value;
  bool diverged = false;
  bool marginal = false;        ///< a divergence heuristic fired close to its threshold
  bool converged = true;        ///< false when a sup endpoint probe or a quadrature budget gave out
  double error_estimate = 0.0;
  std::string note;

  bool reliable() const { return converged && !marginal; }
};

/// C_i of the characterization, i in 1..6. C3 and C6 need q < 1; C4, C5, C6 need r < 1
/// (InvalidRequestError otherwise).
ConstantValue compute_C(int i, const WeightTriple& triple, const Parameters& params, const ConditionOptions& opts = {});

enum class TailStatus { Ok, Warning, Dominated };
std::string to_string(TailStatus s);

struct DiscreteConstant {
  bool computed = false;
  ExtendedReal value;
  double tail_fraction = 0.0;  ///< truncated-tail estimate relative to the total
  TailStatus status = TailStatus::Ok;
};

/// A*[0..3] = A1*..A4*, B*[0..1] = B1*, B2*.
struct DiscreteConstants {
  std::array<DiscreteConstant, 4> A;
  std::array<DiscreteConstant, 2> B;
};

inline constexpr double kTailWarning = 0.01;
inline constexpr double kTailDominated = 0.10;

/// Level-sum counterparts of the continuum constants over the stored cells of
/// `seq`. With `strict`, a requested constant whose truncated tail exceeds 10%
/// raises TruncationError.
DiscreteConstants compute_discrete_constants(const WeightTriple& triple, const Parameters& params,
                                             const DiscretizingSequence& seq, const ConditionOptions& opts = {},
                                             bool strict = true);

/// V_p(x_{k-1}, x_k) for k_min < k <= k_top.
ExtendedReal local_A(int k, const WeightTriple& triple, const Parameters& params, const DiscretizingSequence& seq);

enum class Verdict { Finite, Infinite, Inconclusive };
std::string to_string(Verdict v);

struct ConstantsReport {
  Parameters params;
  Regime regime = Regime::I;
  std::array<std::optional<ConstantValue>, 6> C;
  std::optional<DiscretizingSequence> sequence;
  std::optional<DiscreteConstants> discrete;
  ExtendedReal estimate;
  std::optional<ExtendedReal> discrete_estimate;
  Verdict holds = Verdict::Inconclusive;
  bool pathological = false;
  std::vector<std::string> notes;
};

/// Regime sum C1+C2, C2+C3, C4+C5 or C5+C6 (+inf absorbing).
ExtendedReal estimate_best_constant(const ConstantsReport& report);
/// Discrete counterpart A1*+B1*, A2*+B1*, A3*+B2* or A4*+B2*.
std::optional<ExtendedReal> discrete_estimate(const ConstantsReport& report);

ConstantsReport certify(const WeightTriple& triple, const Parameters& params, const ConditionOptions& opts = {});

/// \int_t^b g tabulated on a grid: cumulative cell integrals plus the improper
/// right tail, with one extra segment integral per query.
class TailIntegral {
 public:
  TailIntegral(RealFunction g, Interval domain, const std::vector<double>& grid, double tol,
               std::vector<double> breakpoints = {});
  double operator()(double t) const;
  bool diverged() const { return diverged_; }
  bool marginal() const { return marginal_; }

 private:
  double segment(double lo, double hi) const;

  RealFunction g_;
  Interval domain_;
  std::vector<double> grid_;
  std::vector<double> breakpoints_;
  std::vector<double> tail_;  ///< tail_[i] = \int_{grid_[i]}^b g
  double tol_;
  bool diverged_ = false;
  mutable bool marginal_ = false;
};

}  // namespace chcert
