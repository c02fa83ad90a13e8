// SPDX-License-Identifier: Apache-2.0
// Direct evaluation of the swapped form on its own interval, with no
// reflection: the independent side of the reflection checks.
#pragma once

#include <algorithm>
#include <cmath>

#include "chcert/conditions.hpp"
#include "chcert/oracle.hpp"
#include "chcert/supremum.hpp"

namespace chcert::testing {

/// Relative agreement that treats two infinities as equal.
inline bool rel_close(double x, double y, double eps) {
  if (std::isinf(x) || std::isinf(y)) return x == y;
  return std::fabs(x - y) <= eps * std::max(std::fabs(x), std::fabs(y));
}

/// Swapped-form LHS by nested quadrature:
/// (\int (\int_a^t (\int_s^b f^p v)^{q/p} u ds)^{r/q} w dt)^{1/r}.
inline double swapped_lhs_direct(const TestFunction& f, const WeightTriple& tr, const Parameters& P, double tol) {
  auto inner = [&](double s) {  // \int_s^b f^p v, f a step function
    double acc = 0.0;
    for (std::size_t i = 0; i < f.values.size(); ++i) {
      const double lo = std::max(s, f.breaks[i]), hi = f.breaks[i + 1];
      if (hi > lo && f.values[i] > 0) acc += std::pow(f.values[i], P.p) * tr.v.integral(lo, hi).value();
    }
    return acc;
  };
  std::vector<double> bps = tr.breakpoints();
  for (double x : f.breaks)
    if (tr.domain().contains(x)) bps.push_back(x);
  std::sort(bps.begin(), bps.end());
  bps.erase(std::unique(bps.begin(), bps.end()), bps.end());
  QuadratureOptions o;
  o.tol = tol;
  o.breakpoints = bps;
  auto middle = [&](double t) {
    QuadratureOptions oi = o;
    oi.breakpoints.clear();
    for (double x : bps)
      if (x < t) oi.breakpoints.push_back(x);
    const auto a = tr.domain().a();
    return integrate([&](double s) { return std::pow(inner(s), P.q / P.p) * tr.u(s); }, Interval(a, t), oi)
        .value.value();
  };
  const double outer =
      integrate([&](double t) { return std::pow(middle(t), P.r / P.q) * tr.w(t); }, tr.domain(), o).value.value();
  return std::pow(outer, 1.0 / P.r);
}

/// Constants of the swapped form written directly with the mirrored
/// primitives W(t) = \int_t^b w, U(t) = \int_a^t u, V(t) = V_p(t, b).
/// Every inner integral and running supremum is a fresh engine call.
inline double swapped_constant_direct(int i, const WeightTriple& tr, const Parameters& P, double tol,
                                      std::size_t nodes = 2048) {
  const Interval dom = tr.domain();
  const double a = dom.a(), b = dom.b();
  const double q = P.q, r = P.r;
  const double rho = r < 1 ? r / (1 - r) : 0.0;
  const VpEvaluator vp(tr.v, P.p);
  auto W = [&](double t) { return tr.w.integral(t, b).value(); };
  auto U = [&](double t) { return tr.u.integral(a, t).value(); };
  auto V = [&](double t) { return vp(t, b); };
  const auto bps = tr.breakpoints();
  QuadratureOptions qo;
  qo.tol = tol;
  qo.breakpoints = bps;
  qo.allow_infinite_values = true;
  SupOptions so;
  so.tol = tol;
  so.nodes = nodes;
  so.breakpoints = bps;
  auto left = [&](const RealFunction& g, double t) {
    QuadratureOptions o = qo;
    o.breakpoints.clear();
    for (double x : bps)
      if (x < t) o.breakpoints.push_back(x);
    return integrate(g, Interval(a, t), o).value.value();
  };
  auto H = [&](double t) { return left([&](double s) { return tr.w(s) * ext::pow(U(s), r / q); }, t); };
  auto G = [&](double t) {
    const double e = q / (1 - q);
    return left([&](double s) { return ext::pow(U(s), e) * tr.u(s) * ext::pow(V(s), e); }, t);
  };
  auto Phi = [&](double t) {
    SupOptions s = so;
    s.nodes = 256;
    s.breakpoints.clear();
    for (double x : bps)
      if (x < t) s.breakpoints.push_back(x);
    auto phi = [&](double x) { return ext::mul(ext::pow(U(x), 1 / q), V(x)); };
    return std::max(phi(t), supremum(phi, Interval(a, t), s).value.value());
  };
  switch (i) {
    case 1:
      return supremum([&](double s) { return ext::pow(W(s), 1 / r) * ext::pow(U(s), 1 / q) * V(s); }, dom, so)
          .value.value();
    case 2:
      return supremum([&](double t) { return ext::pow(H(t), 1 / r) * V(t); }, dom, so).value.value();
    case 3:
      return supremum([&](double t) { return ext::pow(W(t), 1 / r) * ext::pow(G(t), (1 - q) / q); }, dom, so)
          .value.value();
    case 4:
      return ext::pow(
          integrate([&](double t) { return ext::pow(W(t), rho) * tr.w(t) * ext::pow(Phi(t), rho); }, dom, qo)
              .value.value(),
          1 / rho);
    case 5:
      return ext::pow(integrate(
                          [&](double t) {
                            return ext::pow(H(t), rho) * tr.w(t) * ext::pow(U(t), r / q) * ext::pow(V(t), rho);
                          },
                          dom, qo)
                          .value.value(),
                      1 / rho);
    case 6:
      return ext::pow(
          integrate([&](double t) { return ext::pow(W(t), rho) * tr.w(t) * ext::pow(G(t), rho * (1 - q) / q); },
                    dom, qo)
              .value.value(),
          1 / rho);
  }
  return 0.0;
}

}  // namespace chcert::testing
