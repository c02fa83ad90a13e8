// SPDX-License-Identifier: Apache-2.0
#include "chcert/transforms.hpp"

#include <cmath>

#include "chcert/errors.hpp"

namespace chcert {

std::string to_string(Form f) {
  switch (f) {
    case Form::Canonical: return "canonical";
    case Form::Swapped: return "swapped";
    case Form::RhsWeighted: return "rhs-weighted";
  }
  return "?";
}

Form form_from_string(const std::string& s) {
  if (s == "canonical") return Form::Canonical;
  if (s == "swapped") return Form::Swapped;
  if (s == "rhs-weighted") return Form::RhsWeighted;
  throw DomainError("unknown form '" + s + "' (expected canonical, swapped or rhs-weighted)");
}

ProblemInstance::ProblemInstance(Form f, Parameters p, WeightTriple t) : form(f), params(p), triple(std::move(t)) {}

void ProblemInstance::validate() const {
  const auto& P = params;
  if (!(P.q > 0.0) || std::isinf(P.q)) throw DomainError("parameters: q must be positive and finite");
  if (!(P.r > 0.0) || std::isinf(P.r)) throw DomainError("parameters: r must be positive and finite");
  if (form == Form::RhsWeighted) {
    if (!(P.p >= 1.0) || std::isinf(P.p)) throw DomainError("parameters: the rhs-weighted form needs 1 <= p < inf");
  } else {
    P.validate();
  }
}

ProblemInstance reflect(const ProblemInstance& inst) {
  Form f;
  switch (inst.form) {
    case Form::Canonical: f = Form::Swapped; break;
    case Form::Swapped: f = Form::Canonical; break;
    default: throw UnsupportedTransformError("reflect: only the canonical and swapped forms are related by reflection");
  }
  const auto& t = inst.triple;
  return ProblemInstance(f, inst.params, WeightTriple(t.u.reflected(), t.v.reflected(), t.w.reflected()));
}

namespace {

WeightExpr powered(const WeightExpr& v, double kappa) {
  try {
    return v.pow(kappa);
  } catch (const DomainError& e) {
    throw UnsupportedTransformError(std::string("weight not representable after the substitution: ") + e.what());
  }
}

}  // namespace

ProblemInstance to_rhs_form(const ProblemInstance& inst) {
  if (inst.form != Form::Canonical) throw UnsupportedTransformError("to_rhs_form: needs a canonical instance");
  inst.validate();
  const double p = inst.params.p;
  Parameters P{1.0 / p, inst.params.q / p, inst.params.r / p};
  const auto& t = inst.triple;
  return ProblemInstance(Form::RhsWeighted, P, WeightTriple(t.u, powered(t.v, -1.0 / p), t.w));
}

ProblemInstance from_rhs_form(const ProblemInstance& inst) {
  if (inst.form != Form::RhsWeighted) throw UnsupportedTransformError("from_rhs_form: needs an rhs-weighted instance");
  inst.validate();
  const double P = inst.params.p;
  Parameters p{1.0 / P, inst.params.q / P, inst.params.r / P};
  const auto& t = inst.triple;
  return ProblemInstance(Form::Canonical, p, WeightTriple(t.u, powered(t.v, -1.0 / P), t.w));
}

ProblemInstance canonical_image(const ProblemInstance& inst) {
  switch (inst.form) {
    case Form::Canonical: return inst;
    case Form::Swapped: return reflect(inst);
    case Form::RhsWeighted: return from_rhs_form(inst);
  }
  return inst;
}

}  // namespace chcert
