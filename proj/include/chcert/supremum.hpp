// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <vector>

#include "chcert/extended_real.hpp"
#include "chcert/interval.hpp"
#include "chcert/quadrature.hpp"

namespace chcert {

/// Composite sampling grid on an interval: uniform core plus nodes graded
/// logarithmically toward each end (12 decades toward a finite end, 12 decades
/// outward toward an infinite one), plus both sides of every breakpoint.
/// Strictly increasing, all nodes interior.
std::vector<double> composite_grid(Interval domain, std::size_t nodes, const std::vector<double>& breakpoints = {});

struct SupOptions {
  double tol = 1e-8;
  std::size_t nodes = 2048;
  std::vector<double> breakpoints;
  DivergencePolicy divergence{};
  int refine_rounds = 2;
};

enum class SupLocation { Interior, LeftEnd, RightEnd };

struct SupResult {
  ExtendedReal value;
  double argmax = 0.0;
  SupLocation location = SupLocation::Interior;
  bool diverged = false;
  /// false when an endpoint approach was still moving at the resolution limit
  bool converged = true;
  bool marginal = false;
  std::size_t evaluations = 0;
};

/// Supremum of f over the open interval by graded sampling, endpoint probing at
/// geometrically approaching points and Brent refinement around the best nodes.
/// f may return +inf (the supremum is then +inf); NaN raises EvaluationError.
SupResult supremum(const RealFunction& f, Interval domain, const SupOptions& opts = {});

/// Essential supremum for piecewise-continuous f with the given breakpoints;
/// off the breakpoints it coincides with the pointwise supremum.
ExtendedReal ess_sup(const RealFunction& f, Interval domain, double tol = 1e-8,
                     const std::vector<double>& breakpoints = {});

}  // namespace chcert
