// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <random>

#include "chcert/discretize.hpp"

using namespace chcert;

TEST_CASE("levels of the identity primitive on a half line") {
  const auto seq = discretizing_sequence(WeightExpr::constant(Interval(0, kInf), 1), -3, 3);
  CHECK_FALSE(seq.M_finite());
  CHECK(seq.k_min == -3);
  CHECK(seq.k_top == 3);
  CHECK(seq.upper_truncated);
  for (int k = -3; k <= 3; ++k) CHECK(std::fabs(seq.at(k) - std::ldexp(1.0, k)) <= 1e-10 * std::ldexp(1.0, k));
}

TEST_CASE("levels on the unit interval stop at b") {
  const auto seq = discretizing_sequence(WeightExpr::constant(Interval(0, 1), 1));
  REQUIRE(seq.M_finite());
  CHECK(*seq.M == 0);
  CHECK(seq.at(0) == 1.0);
  CHECK(seq.w_total.value() == 1.0);
  CHECK_FALSE(seq.upper_truncated);
  for (int k = -10; k < 0; ++k) CHECK(std::fabs(seq.at(k) - std::ldexp(1.0, k)) <= 1e-10 * std::ldexp(1.0, k));
}

TEST_CASE("levels of an exponential primitive on the line") {
  const auto seq = discretizing_sequence(WeightExpr::exponential(Interval(-kInf, kInf), 1, 1), -5, 5);
  CHECK_FALSE(seq.M_finite());
  for (int k = -5; k <= 5; ++k) CHECK(seq.at(k) == doctest::Approx(k * std::log(2.0)).epsilon(1e-9));
}

TEST_CASE("level accuracy and doubling") {
  const auto w = WeightExpr::power(Interval(0, 3), 2, 0.7);
  const auto seq = discretizing_sequence(w, -30, 30, 1e-10);
  REQUIRE(seq.M_finite());
  for (int k = seq.k_min; k < *seq.M; ++k) {
    const double Wk = primitive_W(w, seq.at(k)).value();
    CHECK(std::fabs(Wk - std::ldexp(1.0, k)) <= 1e-10 * std::ldexp(1.0, k));
    if (k + 1 < *seq.M) CHECK(std::fabs(primitive_W(w, seq.at(k + 1)).value() - 2 * Wk) <= 2e-10 * 2 * Wk);
  }
  CHECK(seq.at(*seq.M) == 3.0);
}

TEST_CASE("a non-integrable weight at a is pathological") {
  CHECK_THROWS_AS(discretizing_sequence(WeightExpr::power(Interval(0, 1), 1, -1)), PathologicalWeightError);
  CHECK_THROWS_AS(check_not_pathological(WeightExpr::power(Interval(0, 1), 1, -1.5)), PathologicalWeightError);
  CHECK_NOTHROW(check_not_pathological(WeightExpr::power(Interval(0, 1), 1, -0.5)));
}

TEST_CASE("an index window above M is shifted down") {
  const auto seq = discretizing_sequence(WeightExpr::constant(Interval(0, 1), 1e-6), 0, 10);
  CHECK(seq.window_shifted);
  CHECK(seq.k_min < *seq.M);
}

TEST_CASE("int-equiv: geometric series with h = 1") {
  const auto w = WeightExpr::constant(Interval(0, 1), 1);
  const auto seq = discretizing_sequence(w);
  const auto rep = verify_int_equiv(w, seq, 0.0, [](double) { return 1.0; });
  CHECK(rep.ratio == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(rep.in_bracket);
}

TEST_CASE("int-equiv: zero test function") {
  const auto w = WeightExpr::constant(Interval(0, 1), 1);
  const auto rep = verify_int_equiv(w, discretizing_sequence(w), 1.0, [](double) { return 0.0; });
  CHECK(rep.exact_zero);
  CHECK(rep.ratio == 1.0);
  CHECK(rep.in_bracket);
}

TEST_CASE("int-equiv: capped reciprocal of W") {
  const auto w = WeightExpr::power(Interval(0, kInf), 1, 0.5);
  const auto seq = discretizing_sequence(w, -20, 20);
  auto h = [&](double t) { return std::min(1e3, 1.0 / primitive_W(w, t).value()); };
  const auto rep = verify_int_equiv(w, seq, 0.0, h);
  CHECK(rep.in_bracket);
  CHECK(rep.ratio >= rep.lower);
  CHECK(rep.ratio <= rep.upper);
}

TEST_CASE("int-equiv: brackets") {
  CHECK(int_equiv_lower(0) == 0.5);
  CHECK(int_equiv_upper(0) == 1.0);
  CHECK(int_equiv_upper(1) == doctest::Approx(1.5));
  CHECK(int_equiv_lower(3) == doctest::Approx((1 - 1.0 / 16) / 4));
}

TEST_CASE("int-equiv: increasing h is rejected") {
  const auto w = WeightExpr::constant(Interval(0, 1), 1);
  CHECK_THROWS_AS(verify_int_equiv(w, discretizing_sequence(w), 0.0, [](double t) { return t; }), PreconditionError);
}

TEST_CASE("int-equiv: random staircases stay inside the bracket") {
  std::mt19937_64 g(29);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const auto w = WeightExpr::power(Interval(0, 2), 1.5, 0.3);
  const auto seq = discretizing_sequence(w);
  for (double alpha : {0.0, 1.0, 3.0})
    for (int trial = 0; trial < 15; ++trial) {
      std::vector<double> br, vals;
      double level = 1.0 + 10 * U(g);
      for (int i = 0; i < 5; ++i) {
        br.push_back(2.0 * (i + U(g)) / 5.0);
        vals.push_back(level);
        level *= U(g);
      }
      auto h = [&](double t) {
        double val = 0.0;
        for (std::size_t i = br.size(); i-- > 0;)
          if (t < br[i]) val = vals[i];
        return val;
      };
      const auto rep = verify_int_equiv(w, seq, alpha, h, 1e-10, br);
      CHECK(rep.in_bracket);
    }
}
