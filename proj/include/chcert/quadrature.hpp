// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "chcert/extended_real.hpp"
#include "chcert/interval.hpp"

namespace chcert {

using RealFunction = std::function<double(double)>;

/// Heuristic deciding that an improper integral (or a supremum approached at an
/// endpoint) is +inf. Applied to the contributions of successive dyadic annuli
/// toward an endpoint: the integral is declared divergent when the annulus
/// contributions fail to contract by the factor (1 - delta) for `consecutive`
/// annuli in a row, or when the running value exceeds `cap`. For suprema the
/// sampled values must grow by (1 + delta) for `consecutive` halvings.
struct DivergencePolicy {
  double delta = 0.05;
  int consecutive = 8;
  double cap = 1e300;
};

struct QuadratureOptions {
  double tol = 1e-8;                  ///< relative
  double abs_tol = 0.0;               ///< absolute floor on the error target
  std::vector<double> breakpoints;    ///< interior points of non-smoothness or singularity
  bool allow_infinite_values = false; ///< an inf sample means the integral is inf
  DivergencePolicy divergence{};
  std::size_t max_evaluations = 4'000'000;
};

struct QuadratureResult {
  ExtendedReal value;
  double error_estimate = 0.0;
  bool diverged = false;
  /// Divergence was declared while annulus contributions were still (slowly)
  /// contracting; the verdict sits close to the heuristic's threshold.
  bool marginal = false;
  std::size_t evaluations = 0;
};

/// Integral of a nonnegative integrand over an open interval.
///
/// The interval is split at the declared breakpoints; every resulting piece is
/// split again at an interior anchor and each half is swept by dyadic annuli
/// graded toward its outer end (shrinking toward a finite end, doubling toward
/// an infinite one). Each annulus is integrated by adaptive Gauss-Kronrod 21.
/// The sweep stops once the geometric tail extrapolated from the last annulus
/// ratios falls below the tolerance.
///
/// Throws EvaluationError on a NaN sample (or an inf sample unless
/// `allow_infinite_values`), BudgetExceededError when the tolerance cannot be
/// met (the exception carries the best estimate).
QuadratureResult integrate(const RealFunction& f, Interval domain, const QuadratureOptions& opts = {});

/// Adaptive Gauss-Kronrod on a finite segment with no endpoint grading.
struct SegmentIntegral {
  double value = 0.0;
  double error = 0.0;
  bool hit_infinity = false;
};

SegmentIntegral integrate_segment(const RealFunction& f, double lo, double hi, double tol, double abs_tol,
                                  bool allow_infinite_values, std::size_t& evaluations,
                                  std::size_t max_evaluations);

}  // namespace chcert
