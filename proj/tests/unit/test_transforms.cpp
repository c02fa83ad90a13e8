// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <iomanip>

#include "chcert/oracle.hpp"
#include "chcert/transforms.hpp"
#include "support/mirror.hpp"

using namespace chcert;

namespace {

WeightTriple ones(Interval I) {
  return {WeightExpr::constant(I, 1), WeightExpr::constant(I, 1), WeightExpr::constant(I, 1)};
}

}  // namespace

TEST_CASE("form names") {
  for (auto f : {Form::Canonical, Form::Swapped, Form::RhsWeighted}) CHECK(form_from_string(to_string(f)) == f);
  CHECK_THROWS_AS(form_from_string("mirrored"), DomainError);
}

TEST_CASE("reflect: unit instance moves to (-1, 0)") {
  const ProblemInstance s(Form::Swapped, {1, 1, 1}, ones(Interval(0, 1)));
  const auto c = reflect(s);
  CHECK(c.form == Form::Canonical);
  CHECK(c.domain() == Interval(-1, 0));
  CHECK(c.triple.u == WeightExpr::constant(Interval(-1, 0), 1));
  const auto back = reflect(c);
  CHECK(back.form == Form::Swapped);
  CHECK(back.domain() == Interval(0, 1));
  CHECK(back.triple.v == s.triple.v);
}

TEST_CASE("reflect: power weight") {
  const Interval I(0, 1);
  const ProblemInstance s(Form::Swapped, {1, 1, 1},
                          {WeightExpr::power(I, 1, 1), WeightExpr::constant(I, 1), WeightExpr::constant(I, 1)});
  const auto c = reflect(s);
  CHECK(c.triple.u.eval(-0.3) == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(c.triple.u.eval(-0.9) == doctest::Approx(0.9).epsilon(1e-15));
  CHECK_THROWS_AS(reflect(to_rhs_form(ProblemInstance(Form::Canonical, {1, 1, 1}, ones(I)))), UnsupportedTransformError);
}

TEST_CASE("rhs form: parameter substitution") {
  const Interval I(0, 1);
  const auto p1 = to_rhs_form(ProblemInstance(Form::Canonical, {1, 1, 1}, {WeightExpr::constant(I, 1),
                                                                           WeightExpr::power(I, 2, 1.5),
                                                                           WeightExpr::constant(I, 1)}));
  CHECK(p1.form == Form::RhsWeighted);
  CHECK(p1.params == Parameters{1, 1, 1});
  CHECK(p1.triple.v.eval(0.5) == doctest::Approx(1.0 / (2 * std::pow(0.5, 1.5))).epsilon(1e-15));

  const auto p2 = to_rhs_form(ProblemInstance(Form::Canonical, {0.5, 2, 4}, ones(I)));
  CHECK(p2.params == Parameters{2, 4, 8});
  CHECK(p2.triple.v == WeightExpr::constant(I, 1));
  CHECK_THROWS_AS(to_rhs_form(p2), DomainError);
}

TEST_CASE("rhs form round trip is exact") {
  const Interval I(0, kInf);
  const WeightTriple tr{WeightExpr::exponential(I, 1, -1), WeightExpr::power(I, 3, -0.25),
                        WeightExpr::power_log(I, 1, 0.5, 1.0, -1.0)};
  for (double p : {1.0, 0.5, 0.25, 0.125}) {
    const ProblemInstance inst(Form::Canonical, {p, 0.75, 1.5}, tr);
    const auto back = from_rhs_form(to_rhs_form(inst));
    CHECK(back.form == Form::Canonical);
    CHECK(back.params == inst.params);
    CHECK(back.triple.u == tr.u);
    CHECK(back.triple.v == tr.v);
    CHECK(back.triple.w == tr.w);
  }
}

TEST_CASE("rhs form rejects an overflowing coefficient") {
  const Interval I(0, 1);
  const ProblemInstance inst(Form::Canonical, {0.01, 1, 1},
                             {WeightExpr::constant(I, 1), WeightExpr::constant(I, 1e-300), WeightExpr::constant(I, 1)});
  CHECK_THROWS_AS(to_rhs_form(inst), UnsupportedTransformError);
}

TEST_CASE("canonical image") {
  const Interval I(0, 1);
  const ProblemInstance c(Form::Canonical, {0.5, 1, 1}, ones(I));
  CHECK(canonical_image(c).domain() == I);
  CHECK(canonical_image(ProblemInstance(Form::Swapped, {0.5, 1, 1}, ones(I))).domain() == Interval(-1, 0));
  CHECK(canonical_image(to_rhs_form(c)).params == c.params);
  CHECK_THROWS_AS(ProblemInstance(Form::RhsWeighted, {0.5, 1, 1}, ones(I)).validate(), DomainError);
}

TEST_CASE("reflection leaves the constants unchanged") {
  const Interval I(0, 1);
  const WeightTriple tr{WeightExpr::power(I, 1, 0.5), WeightExpr::power(I, 2, -0.3), WeightExpr::power(I, 1, 1.5)};
  ConditionOptions o;
  o.tol = 1e-10;
  for (Parameters P : {Parameters{1, 1, 1}, Parameters{0.5, 0.5, 2}, Parameters{0.7, 2, 0.5}, Parameters{0.5, 0.5, 0.5}}) {
    const auto img = canonical_image(ProblemInstance(Form::Swapped, P, tr));
    for (int i : regime_pair(classify_regime(P))) {
      const double via = compute_C(i, img.triple, P, o).value.value();
      const double direct = testing::swapped_constant_direct(i, tr, P, 1e-10);
      INFO("C" << i << " p=" << P.p << " q=" << P.q << " r=" << P.r);
      INFO(std::setprecision(17) << "via " << via << " direct " << direct);
      CHECK(testing::rel_close(via, direct, 1e-8));
    }
  }
}

TEST_CASE("paired oracles agree on the unit instance") {
  const ProblemInstance c(Form::Canonical, {1, 1, 1}, ones(Interval(0, 1)));
  OracleOptions o;
  o.restarts = 8;
  const double a = maximize_ratio(c, o).lower_bound.value();
  const double b = maximize_ratio(to_rhs_form(c), o).lower_bound.value();
  const double s = maximize_ratio(ProblemInstance(Form::Swapped, {1, 1, 1}, c.triple), o).lower_bound.value();
  CHECK(std::fabs(a - b) <= 1e-2 * a);
  CHECK(std::fabs(a - s) <= 1e-2 * a);
}
