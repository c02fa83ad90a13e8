// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "chcert/conditions.hpp"
#include "chcert/discretize.hpp"
#include "chcert/transforms.hpp"

namespace chcert {

/// Nonnegative step function: values[i] on (breaks[i], breaks[i+1]), zero elsewhere.
struct TestFunction {
  std::vector<double> breaks;
  std::vector<double> values;

  TestFunction() = default;
  TestFunction(std::vector<double> breaks, std::vector<double> values);
  static TestFunction indicator(double lo, double hi, double height = 1.0);

  std::size_t cells() const { return values.size(); }
  /// \int f, exact.
  double integral() const;
  /// At least one positive value.
  bool usable() const;
  TestFunction scaled(double lambda) const;
  /// t -> f(-t).
  TestFunction reflected() const;
  /// Breaks finite, increasing and inside the closure of `domain`; values finite and nonnegative.
  void validate(const Interval& domain) const;

  friend bool operator==(const TestFunction&, const TestFunction&) = default;
};

enum class EvalMode {
  Fast,     ///< fixed 10-point Gauss-Legendre per graded panel (search)
  Accurate  ///< adaptive Gauss-Kronrod per panel at the requested tolerance
};

/// Both sides of the inequality of a problem instance for step functions.
/// The innermost layer is a closed-form weight primitive per cell; the two
/// outer layers are integrated per panel, with closed forms to the left of the
/// support and a tabulated tail integral to its right.
class RatioEvaluator {
 public:
  explicit RatioEvaluator(const ProblemInstance& inst, double tol = 1e-8);
  ~RatioEvaluator();
  RatioEvaluator(RatioEvaluator&&) noexcept;

  const ProblemInstance& instance() const;
  ExtendedReal lhs(const TestFunction& f, EvalMode mode = EvalMode::Accurate) const;
  ExtendedReal rhs(const TestFunction& f) const;
  /// lhs/rhs; 0 when f is unusable or the right side is infinite.
  ExtendedReal ratio(const TestFunction& f, EvalMode mode = EvalMode::Accurate) const;

  /// Cell-local middle layer on (lo, hi), canonical instances only:
  /// (\int_lo^hi (\int_lo^t h^p v)^{q/p} u dt)^{1/q} for h supported in [lo, hi].
  ExtendedReal local_lhs(const TestFunction& h, double lo, double hi, EvalMode mode = EvalMode::Accurate) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

ExtendedReal eval_LHS(const TestFunction& f, const ProblemInstance& inst, double tol = 1e-8);
ExtendedReal eval_RHS(const TestFunction& f, const ProblemInstance& inst);

struct OracleOptions {
  std::size_t restarts = 64;  ///< random restarts of the third strategy (the "budget")
  std::size_t steps = 200;    ///< ascent steps per restart and per combination sweep
  std::uint64_t seed = 1;
  double tol = 1e-8;          ///< final re-evaluation tolerance
  int k_min = kDefaultKMin;
  int k_cap = kDefaultKCap;
  double min_width = 1e-6;    ///< smallest shrinking width, relative to the local scale
};

struct OracleResult {
  ExtendedReal lower_bound;          ///< ratio(best_f), re-evaluated in accurate mode
  TestFunction best_f;
  std::string best_strategy;         ///< "cells", "shrinking", "profile", "combination" or "restart"
  /// Best fast-mode ratio so far: after the single-cell scan, after the
  /// combination ascent, then after each restart. Nondecreasing.
  std::vector<double> trace;
  /// Extrapolated limit of the best shrinking-width family (Aitken), when the
  /// best candidate came from one.
  std::optional<double> delta_limit;
  std::uint64_t seed = 0;
  std::size_t evaluations = 0;
  std::size_t rejected = 0;          ///< candidates whose evaluation raised a numerical error
};

/// Randomized lower bound for the best constant of `inst`. Deterministic in
/// (instance, options). Throws DegenerateInstanceError when no candidate has a
/// positive finite right side, DomainError for zero restarts or steps.
OracleResult maximize_ratio(const ProblemInstance& inst, const OracleOptions& opts = {});
OracleResult maximize_ratio(const WeightTriple& triple, const Parameters& params, std::size_t budget,
                            std::uint64_t seed);

/// Lower bound on the saturation constant of the cell (x_{k-1}, x_k) from the
/// same search restricted to the cell and the cell-local functional.
OracleResult local_B(int k, const WeightTriple& triple, const Parameters& params, const DiscretizingSequence& seq,
                     const OracleOptions& opts = {});

}  // namespace chcert
