// SPDX-License-Identifier: Apache-2.0
#include "chcert/supremum.hpp"

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <limits>
#include <sstream>

#include "chcert/errors.hpp"

namespace chcert {
namespace {

constexpr double kDecades = 12.0;

double checked(const RealFunction& f, double t, std::size_t& evals) {
  const double y = f(t);
  ++evals;
  if (std::isnan(y)) {
    std::ostringstream os;
    os.precision(17);
    os << "supremum: function returned NaN at t=" << t;
    throw EvaluationError(os.str());
  }
  return y;
}

double min_distance(double e) {
  return e == 0.0 ? 1e-290 : 16.0 * std::numeric_limits<double>::epsilon() * std::fabs(e);
}

struct Probe {
  double best = -kInf;
  double arg = 0.0;
  bool diverged = false;
  bool converged = true;
  bool marginal = false;
};

// Walk from `start` toward the end `e`, halving the distance (finite e) or
// doubling the reach (infinite e).
Probe probe_endpoint(const RealFunction& f, double start, double e, double global_max, const SupOptions& opts,
                     std::size_t& evals) {
  Probe pr;
  const auto& pol = opts.divergence;
  const bool inf_end = std::isinf(e);
  const double dir = e > start ? 1.0 : -1.0;
  double prev = checked(f, start, evals);
  pr.best = prev;
  pr.arg = start;
  if (std::isinf(prev)) {
    pr.diverged = true;
    return pr;
  }
  int growth_run = 0, settled_run = 0;
  double min_growth = kInf;
  double prev_delta = 0.0;
  double dist = inf_end ? std::max(1.0, std::fabs(start)) : std::fabs(e - start);
  double t = start;
  for (int j = 0; j < 4000; ++j) {
    double next;
    if (inf_end) {
      dist *= 2.0;
      next = t + dir * dist;
      if (std::fabs(next) > 1e300) break;
    } else {
      dist *= 0.5;
      if (dist < min_distance(e)) break;
      next = e - dir * dist;
      if (next == t) break;
    }
    t = next;
    const double y = checked(f, t, evals);
    if (y > pr.best) {
      pr.best = y;
      pr.arg = t;
    }
    if (std::isinf(y) || y > pol.cap) {
      pr.best = kInf;
      pr.diverged = true;
      return pr;
    }
    if (prev > 0.0 && y >= (1.0 + pol.delta) * prev) {
      ++growth_run;
      min_growth = std::min(min_growth, y / prev);
    } else {
      growth_run = 0;
      min_growth = kInf;
    }
    if (growth_run >= pol.consecutive) {
      pr.marginal = min_growth < 1.0 + 2.0 * pol.delta;
      pr.best = kInf;
      pr.diverged = true;
      return pr;
    }
    const double scale = std::max({global_max, pr.best, 0.0});
    const double delta = y - prev;
    if (std::fabs(delta) <= opts.tol * scale || (y == 0.0 && prev == 0.0)) {
      ++settled_run;
    } else {
      settled_run = 0;
    }
    if (settled_run >= 4) {
      // Geometric extrapolation of a still-increasing approach.
      if (delta > 0.0 && prev_delta > 0.0 && delta < prev_delta) {
        const double rho = delta / prev_delta;
        pr.best = std::max(pr.best, y + delta * rho / (1.0 - rho));
      }
      return pr;
    }
    prev_delta = delta;
    prev = y;
  }
  // Resolution limit reached while the values were still moving.
  const double scale = std::max({global_max, pr.best, 0.0});
  if (prev_delta > opts.tol * scale) pr.converged = false;
  return pr;
}

}  // namespace

std::vector<double> composite_grid(Interval domain, std::size_t nodes, const std::vector<double>& breakpoints) {
  nodes = std::max<std::size_t>(nodes, 16);
  const std::size_t n_uniform = nodes / 2;
  const std::size_t n_graded = nodes / 4;
  std::vector<double> g;
  g.reserve(nodes + 4 * breakpoints.size() + 4);
  const double a = domain.a(), b = domain.b();

  auto graded = [&](double e, double toward_sign, double scale) {
    // toward_sign: +1 means nodes lie at e + d, -1 at e - d.
    for (std::size_t i = 0; i < n_graded; ++i) {
      const double d = scale * std::pow(10.0, -kDecades * double(i) / double(n_graded));
      g.push_back(e + toward_sign * d);
    }
  };
  auto outward = [&](double c, double sign, double scale) {
    for (std::size_t i = 0; i < n_graded; ++i) {
      const double d = scale * std::pow(10.0, kDecades * double(i + 1) / double(n_graded));
      g.push_back(c + sign * d);
    }
  };

  double lo_u, hi_u;
  if (domain.bounded()) {
    lo_u = a;
    hi_u = b;
    const double h = 0.25 * (b - a);
    graded(a, +1.0, h);
    graded(b, -1.0, h);
  } else if (domain.left_finite()) {
    const double s = std::max(1.0, std::fabs(a));
    lo_u = a;
    hi_u = a + 4.0 * s;
    graded(a, +1.0, s);
    outward(a, +1.0, s);
  } else if (domain.right_finite()) {
    const double s = std::max(1.0, std::fabs(b));
    lo_u = b - 4.0 * s;
    hi_u = b;
    graded(b, -1.0, s);
    outward(b, -1.0, s);
  } else {
    lo_u = -4.0;
    hi_u = 4.0;
    outward(0.0, +1.0, 1.0);
    outward(0.0, -1.0, 1.0);
  }
  for (std::size_t i = 0; i < n_uniform; ++i) g.push_back(lo_u + (hi_u - lo_u) * (double(i) + 0.5) / double(n_uniform));
  for (double bp : breakpoints) {
    if (!domain.contains(bp)) continue;
    const double off = 1e-12 * std::max(1.0, std::fabs(bp));
    g.push_back(bp - off);
    g.push_back(bp + off);
  }
  std::vector<double> out;
  out.reserve(g.size());
  for (double t : g)
    if (domain.contains(t)) out.push_back(t);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

SupResult supremum(const RealFunction& f, Interval domain, const SupOptions& opts) {
  SupResult res;
  const auto grid = composite_grid(domain, opts.nodes, opts.breakpoints);
  std::vector<double> vals(grid.size());
  std::size_t best = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    vals[i] = checked(f, grid[i], res.evaluations);
    if (std::isinf(vals[i])) {
      res.value = ExtendedReal::infinity();
      res.argmax = grid[i];
      res.diverged = true;
      return res;
    }
    if (vals[i] > vals[best]) best = i;
  }
  double top = vals[best];
  res.argmax = grid[best];

  // Endpoint probes.
  auto left = probe_endpoint(f, grid.front(), domain.a(), top, opts, res.evaluations);
  auto right = probe_endpoint(f, grid.back(), domain.b(), top, opts, res.evaluations);
  for (const auto* pr : {&left, &right}) {
    if (pr->diverged) {
      res.value = ExtendedReal::infinity();
      res.diverged = true;
      res.marginal = pr->marginal;
      res.location = pr == &left ? SupLocation::LeftEnd : SupLocation::RightEnd;
      res.argmax = pr == &left ? domain.a() : domain.b();
      return res;
    }
  }

  // Interior refinement around the best local maxima.
  std::vector<std::size_t> cands;
  for (std::size_t i = 1; i + 1 < grid.size(); ++i)
    if (vals[i] >= vals[i - 1] && vals[i] >= vals[i + 1]) cands.push_back(i);
  std::sort(cands.begin(), cands.end(), [&](auto x, auto y) { return vals[x] > vals[y]; });
  if (cands.size() > 3) cands.resize(3);
  auto neg = [&](double t) {
    const double y = checked(f, t, res.evaluations);
    return std::isinf(y) ? -std::numeric_limits<double>::max() : -y;
  };
  double best_t = grid[best], best_v = top;
  for (std::size_t ci : cands) {
    double lo = grid[ci - 1], hi = grid[ci + 1];
    for (int round = 0; round < opts.refine_rounds; ++round) {
      boost::uintmax_t iters = 200;
      auto [x, fx] = boost::math::tools::brent_find_minima(neg, lo, hi, 40, iters);
      if (-fx > best_v) {
        best_v = -fx;
        best_t = x;
      }
      const double w = 0.125 * (hi - lo);
      lo = std::max(lo, x - w);
      hi = std::min(hi, x + w);
      if (!(lo < hi)) break;
    }
  }
  res.value = best_v;
  res.argmax = best_t;
  if (left.best > res.value.value()) {
    res.value = left.best;
    res.argmax = left.arg;
    res.location = SupLocation::LeftEnd;
    res.converged = left.converged;
  }
  if (right.best > res.value.value()) {
    res.value = right.best;
    res.argmax = right.arg;
    res.location = SupLocation::RightEnd;
    res.converged = right.converged;
  }
  return res;
}

ExtendedReal ess_sup(const RealFunction& f, Interval domain, double tol, const std::vector<double>& breakpoints) {
  SupOptions o;
  o.tol = tol;
  o.breakpoints = breakpoints;
  return supremum(f, domain, o).value;
}

}  // namespace chcert
