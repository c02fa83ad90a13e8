// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "chcert/conditions.hpp"
#include "chcert/weights.hpp"

namespace chcert {

/// canonical:    (\int (\int_t^b (\int_a^s f^p v)^{q/p} u ds)^{r/q} w dt)^{1/r} <= C \int f,   p <= 1
/// swapped:      (\int (\int_a^t (\int_s^b f^p v)^{q/p} u ds)^{r/q} w dt)^{1/r} <= C \int f,   p <= 1
/// rhs-weighted: (\int (\int_t^b (\int_a^s f)^q u ds)^{r/q} w dt)^{1/r} <= C (\int f^p v)^{1/p}, p >= 1
enum class Form { Canonical, Swapped, RhsWeighted };

std::string to_string(Form f);
Form form_from_string(const std::string& s);

struct ProblemInstance {
  Form form = Form::Canonical;
  Parameters params;
  WeightTriple triple;

  ProblemInstance(Form f, Parameters p, WeightTriple t);
  const Interval& domain() const { return triple.domain(); }
  /// Form/parameter compatibility; throws DomainError.
  void validate() const;
};

/// Swapped <-> canonical via t -> -t on all three weights. Involutive.
ProblemInstance reflect(const ProblemInstance& inst);

/// Canonical (p, q, r, v) -> rhs-weighted (1/p, q/p, r/p, v^{-1/p}); the best
/// constant of the image is C^p. Throws UnsupportedTransformError when a
/// powered coefficient leaves the double range.
ProblemInstance to_rhs_form(const ProblemInstance& inst);
/// Inverse substitution: rhs-weighted (P, Q, R, v') -> canonical (1/P, Q/P, R/P, v'^{-1/P}).
ProblemInstance from_rhs_form(const ProblemInstance& inst);

/// The canonical instance whose constants govern `inst` (identity, reflection,
/// or the inverse substitution).
ProblemInstance canonical_image(const ProblemInstance& inst);

}  // namespace chcert
