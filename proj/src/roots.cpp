// SPDX-License-Identifier: Apache-2.0
#include "chcert/roots.hpp"

#include <boost/math/tools/toms748_solve.hpp>
#include <cmath>
#include <limits>
#include <sstream>

#include "chcert/errors.hpp"

namespace chcert {
namespace {

[[noreturn]] void no_root(double target, Interval br) {
  std::ostringstream os;
  os.precision(17);
  os << "no root: target " << target << " is outside the range of G on (" << br.a() << ", " << br.b() << ")";
  throw NoRootError(os.str());
}

// Move from x toward end e until pred(G(t)) holds; distances halve toward a
// finite end and double toward an infinite one.
template <class Pred>
bool scan(const RealFunction& G, double x, double e, Pred pred, double& found, double& value) {
  const double dir = e > x ? 1.0 : -1.0;
  double dist = std::isinf(e) ? std::max(1.0, std::fabs(x)) : std::fabs(e - x);
  for (int j = 0; j < 2100; ++j) {
    double t;
    if (std::isinf(e)) {
      t = x + dir * dist;
      dist *= 2.0;
      if (std::fabs(t) > 1e300) return false;
    } else {
      dist *= 0.5;
      t = e - dir * dist;
      if (dist == 0.0 || t == e) return false;
    }
    const double g = G(t);
    if (pred(g)) {
      found = t;
      value = g;
      return true;
    }
  }
  return false;
}

}  // namespace

double find_root_increasing(const RealFunction& G, double target, Interval bracket, double tol, double hint) {
  if (!(tol > 0.0)) throw DomainError("find_root_increasing: tolerance must be positive");
  const double c = bracket.contains(hint) ? hint : bracket.anchor();
  const double gc = G(c);
  if (std::isnan(gc)) throw EvaluationError("find_root_increasing: G returned NaN");
  if (gc == target) return c;

  double lo = c, hi = c, glo = gc, ghi = gc;
  if (gc < target) {
    if (!scan(G, c, bracket.b(), [&](double g) { return g >= target; }, hi, ghi)) no_root(target, bracket);
  } else {
    if (!scan(G, c, bracket.a(), [&](double g) { return g <= target; }, lo, glo)) no_root(target, bracket);
  }
  if (glo == target) return lo;
  if (ghi == target) return hi;

  auto F = [&](double x) { return G(x) - target; };
  boost::uintmax_t iters = 300;
  auto tolerance = [](double a, double b) {
    return std::fabs(b - a) <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(std::fabs(a), std::fabs(b)) ||
           std::fabs(b - a) <= 1e-300;
  };
  auto [x0, x1] = boost::math::tools::toms748_solve(F, lo, hi, glo - target, ghi - target, tolerance, iters);
  const double r0 = std::fabs(G(x0) - target), r1 = std::fabs(G(x1) - target);
  const double x = r0 <= r1 ? x0 : x1;
  const double resid = std::min(r0, r1);
  if (resid > tol * std::fabs(target)) {
    std::ostringstream os;
    os.precision(17);
    os << "find_root_increasing: residual " << resid << " exceeds tolerance at x=" << x;
    throw NumericalError(os.str());
  }
  return x;
}

}  // namespace chcert
