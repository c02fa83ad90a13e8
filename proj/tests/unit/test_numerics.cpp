// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <random>

#include "chcert/roots.hpp"
#include "chcert/supremum.hpp"

using namespace chcert;

TEST_CASE("integrate: constant on the unit interval") {
  const auto r = integrate([](double) { return 1.0; }, Interval(0, 1));
  CHECK_FALSE(r.diverged);
  CHECK(r.value.value() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("integrate: decaying exponential on a half line") {
  const auto r = integrate([](double t) { return std::exp(-t); }, Interval(0, kInf));
  CHECK_FALSE(r.diverged);
  CHECK(std::fabs(r.value.value() - 1.0) <= 1e-8);
}

TEST_CASE("integrate: 1/t at the origin diverges") {
  const auto r = integrate([](double t) { return 1.0 / t; }, Interval(0, 1));
  CHECK(r.diverged);
  CHECK(r.value.is_infinite());
}

TEST_CASE("integrate: integrable endpoint singularities and both ends infinite") {
  CHECK(integrate([](double t) { return 1.0 / std::sqrt(t); }, Interval(0, 1)).value.value() ==
        doctest::Approx(2.0).epsilon(1e-8));
  CHECK(integrate([](double t) { return std::exp(-t * t); }, Interval(-kInf, kInf)).value.value() ==
        doctest::Approx(std::sqrt(M_PI)).epsilon(1e-8));
  CHECK(integrate([](double t) { return 1.0 / (t * t); }, Interval(1, kInf)).value.value() ==
        doctest::Approx(1.0).epsilon(1e-8));
  CHECK(integrate([](double t) { return 1.0 / t; }, Interval(1, kInf)).diverged);
}

TEST_CASE("integrate: breakpoints of a step integrand") {
  QuadratureOptions o;
  o.breakpoints = {0.3};
  const auto r = integrate([](double t) { return t < 0.3 ? 2.0 : 5.0; }, Interval(0, 1), o);
  CHECK(r.value.value() == doctest::Approx(0.6 + 3.5).epsilon(1e-12));
}

TEST_CASE("integrate: NaN sample is an evaluation error") {
  CHECK_THROWS_AS(integrate([](double) { return std::nan(""); }, Interval(0, 1)), EvaluationError);
}

TEST_CASE("integrate: additivity and monotonicity on random splits") {
  std::mt19937_64 g(11);
  std::uniform_real_distribution<double> U(0.05, 0.95);
  const double tol = 1e-9;
  QuadratureOptions o;
  o.tol = tol;
  auto f = [](double t) { return std::pow(t, -0.4) * (1.0 + std::sin(7.0 * t)) + std::exp(t); };
  const double whole = integrate(f, Interval(0, 1), o).value.value();
  for (int i = 0; i < 25; ++i) {
    const double c = U(g);
    const double left = integrate(f, Interval(0, c), o).value.value();
    const double right = integrate(f, Interval(c, 1), o).value.value();
    CHECK(std::fabs(left + right - whole) <= 3.0 * tol * whole);
    CHECK(left <= whole * (1 + 2 * tol));
    const double inner = integrate(f, Interval(c * 0.5, c), o).value.value();
    CHECK(inner <= left * (1 + 2 * tol));
  }
}

TEST_CASE("ess_sup: spec examples") {
  CHECK(ess_sup([](double) { return 3.0; }, Interval(0, 1)).value() == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(std::fabs(ess_sup([](double t) { return t * (1 - t); }, Interval(0, 1)).value() - 0.25) <= 1e-8 * 0.25);
  CHECK(ess_sup([](double t) { return 1.0 / t; }, Interval(0, 1)).is_infinite());
}

TEST_CASE("supremum: endpoint-attained values and infinite domains") {
  const auto s = supremum([](double t) { return std::exp(-t); }, Interval(0, kInf));
  CHECK(s.value.value() == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(s.location == SupLocation::LeftEnd);
  const auto m = supremum([](double t) { return t * std::exp(-t); }, Interval(0, kInf));
  CHECK(m.value.value() == doctest::Approx(std::exp(-1.0)).epsilon(1e-8));
  CHECK(m.argmax == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("ess_sup dominates every sampled interior value") {
  std::mt19937_64 g(5);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  auto f = [](double t) { return std::sin(13.0 * t) * std::sin(13.0 * t) * (1.0 + t) + (t > 0.6 ? 0.5 : 0.0); };
  const double s = ess_sup(f, Interval(0, 1), 1e-9, {0.6}).value();
  for (int i = 0; i < 2000; ++i) {
    const double t = U(g);
    if (t == 0.0 || t == 0.6) continue;
    CHECK(f(t) <= s * (1 + 1e-9));
  }
}

TEST_CASE("find_root_increasing: spec examples") {
  CHECK(find_root_increasing([](double t) { return t; }, 2.0, Interval(0, 10)) == doctest::Approx(2.0).epsilon(1e-8));
  const double x = find_root_increasing([](double t) { return 1 - std::exp(-t); }, 0.5, Interval(0, 10));
  CHECK(std::fabs(x - std::log(2.0)) <= 1e-7);
  CHECK_THROWS_AS(find_root_increasing([](double t) { return t; }, 20.0, Interval(0, 10)), NoRootError);
}

TEST_CASE("find_root_increasing: consistent and deterministic") {
  auto G = [](double t) { return std::expm1(t) + t * t * t; };
  for (double target : {1e-6, 0.3, 5.0, 1e4}) {
    const double x = find_root_increasing(G, target, Interval(0, kInf), 1e-10);
    CHECK(std::fabs(G(x) - target) <= 1e-10 * target);
    CHECK(find_root_increasing(G, target, Interval(0, kInf), 1e-10) == x);
  }
}

TEST_CASE("ExtendedReal conventions") {
  const ExtendedReal inf = ExtendedReal::infinity();
  CHECK((inf + 1.0).is_infinite());
  CHECK((ExtendedReal(0.0) * inf).value() == 0.0);
  CHECK((ExtendedReal(1.0) / inf).value() == 0.0);
  CHECK((inf / inf).value() == 0.0);
  CHECK(max(ExtendedReal(2.0), inf).is_infinite());
  CHECK_THROWS(ExtendedReal(std::nan("")));
  CHECK_THROWS(ExtendedReal(-kInf));
}

TEST_CASE("Interval validation") {
  CHECK_THROWS_AS(Interval(1, 1), DomainError);
  CHECK_THROWS_AS(Interval(kInf, kInf), DomainError);
  CHECK(Interval(-kInf, kInf).anchor() == 0.0);
}
