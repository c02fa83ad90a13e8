// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "chcert/discrete_lemmas.hpp"
#include "chcert/errors.hpp"
#include "chcert/lemma_suites.hpp"

using namespace chcert;

TEST_CASE("strong increase ratio") {
  CHECK(strong_increase_ratio({1, 2, 4, 8}) == 2.0);
  CHECK(strong_increase_ratio({1, 1, 1}) == 1.0);
  CHECK(strong_increase_ratio({1, 3, 4}) == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("summation by parts") {
  auto r = abel_identity_check({1, 1}, {1, 2});
  CHECK(r.lhs == 3.0);
  CHECK(r.rhs == 3.0);
  r = abel_identity_check({0.5, 2, 7}, {3, 3, 3});
  CHECK(r.lhs == doctest::Approx(9.5 * 3));
  CHECK(r.rel_diff <= 1e-15);
  r = abel_identity_check({4}, {2.5});
  CHECK(r.lhs == 10.0);
  CHECK(r.rhs == 10.0);
  CHECK_THROWS_AS(abel_identity_check({1, 1}, {2, 1}), PreconditionError);
}

TEST_CASE("tail power: two unit terms with constant b") {
  for (double beta : {0.5, 1.0, 3.0}) {
    const auto r = tail_power_equivalence({0, {1, 1}}, {0, {beta, beta}}, 1.0);
    CHECK(r.lhs == doctest::Approx(3 * beta));
    CHECK(r.rhs == doctest::Approx(4 * beta));
    CHECK(r.ratio == doctest::Approx(0.75));
    CHECK(r.in_bracket);
  }
}

TEST_CASE("tail power: geometric terms") {
  PositiveSequence a{0, {}}, b{0, {}};
  for (int k = 0; k < 10; ++k) {
    a.values.push_back(std::ldexp(1.0, k));
    b.values.push_back(std::ldexp(1.0, k));
  }
  const auto r = tail_power_equivalence(a, b, 1.0);
  CHECK(r.in_bracket);
  CHECK(tail_power_bracket(1.0).lower == 0.5);
  CHECK(tail_power_bracket(1.0).upper == 1.0);
}

TEST_CASE("tail power: a truncated head that is not negligible is an error") {
  PositiveSequence a{-3, {1, 1, 1}, true};
  CHECK_THROWS_AS(tail_power_equivalence(a, {-3, {1, 1, 1}}, 1.0), TruncationError);
}

TEST_CASE("tail comparison examples") {
  auto r = tail_comparison_check(TailVariant::SupSup, {1, 2, 4}, {3, 1, 2}, 1.0);
  CHECK(r.lhs == 8.0);
  CHECK(r.rhs == 8.0);
  r = tail_comparison_check(TailVariant::SumSum, {1, 2, 4}, {1, 1, 1}, 1.0);
  CHECK(r.lhs == 11.0);
  CHECK(r.rhs == 7.0);
  CHECK(r.bracket.lower == 1.0);
  CHECK(r.bracket.upper == 2.0);
  CHECK(r.in_bracket);
  for (auto v : {TailVariant::SupSup, TailVariant::SumSum, TailVariant::SumSup, TailVariant::SupSum}) {
    const auto one = tail_comparison_check(v, {5}, {0.3}, 2.0);
    CHECK(one.lhs == one.rhs);
  }
}

TEST_CASE("tail comparison preconditions") {
  CHECK_THROWS_AS(tail_comparison_check(TailVariant::SumSum, {1, 1, 1}, {1, 1, 1}, 1.0), PreconditionError);
  CHECK_THROWS_AS(tail_comparison_check(TailVariant::SupSup, {2, 1}, {1, 1}, 1.0), PreconditionError);
  CHECK_NOTHROW(tail_comparison_check(TailVariant::SupSup, {1, 1}, {1, 1}, 1.0));
  CHECK(tail_variant_from_string(to_string(TailVariant::SupSum)) == TailVariant::SupSum);
  CHECK_THROWS_AS(tail_variant_from_string("sum-max"), DomainError);
}

TEST_CASE("tail comparison brackets") {
  CHECK(tail_comparison_bracket(TailVariant::SumSup, 2.0, 1.0).upper == 2.0);
  CHECK(tail_comparison_bracket(TailVariant::SupSum, 2.0, 1.0).upper == doctest::Approx(2.0));
  CHECK(tail_comparison_bracket(TailVariant::SupSum, 4.0, 2.0).upper == doctest::Approx(4.0));
  // beta > 1 costs more than the geometric factor
  CHECK(tail_comparison_bracket(TailVariant::SumSum, 2.0, 2.0).upper > 2.0);
}

TEST_CASE("randomized suites pass with zero failures") {
  for (const auto& name : lemma_suite_names()) {
    const auto res = run_lemma_suite(name, name == "int-equiv" ? 40 : 200, 99);
    INFO(name);
    CHECK(res.cases > 0);
    CHECK(res.failures == 0);
    for (const auto& b : res.buckets) {
      CHECK(b.min_ratio >= b.bracket_lower * (1 - 1e-12));
      CHECK(b.max_ratio <= b.bracket_upper * (1 + 1e-12));
    }
  }
  CHECK_THROWS_AS(run_lemma_suite("nope", 10, 1), DomainError);
}

TEST_CASE("suites are deterministic in the seed") {
  const auto a = run_lemma_suite("sum-sum", 100, 4), b = run_lemma_suite("sum-sum", 100, 4);
  REQUIRE(a.buckets.size() == b.buckets.size());
  for (std::size_t i = 0; i < a.buckets.size(); ++i) CHECK(a.buckets[i].max_ratio == b.buckets[i].max_ratio);
}
