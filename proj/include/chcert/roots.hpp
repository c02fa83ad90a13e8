// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "chcert/interval.hpp"
#include "chcert/quadrature.hpp"

namespace chcert {

/// Solve G(x) = target for a continuous increasing G on `bracket`.
///
/// Either bracket end may be infinite: a finite sub-bracket is found by
/// exponential scanning from `bracket.anchor()` (or from `hint` when it is
/// interior). Returns x with |G(x) - target| <= tol * |target|.
/// Throws NoRootError when target lies outside the range of G on the bracket.
double find_root_increasing(const RealFunction& G, double target, Interval bracket, double tol = 1e-8,
                            double hint = kInf);

}  // namespace chcert
