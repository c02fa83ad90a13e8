// SPDX-License-Identifier: Apache-2.0
#include "chcert/quadrature.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>

#include "chcert/errors.hpp"

namespace chcert {
namespace {

using Kronrod = boost::math::quadrature::gauss_kronrod<double, 21>;
using Gauss = boost::math::quadrature::gauss<double, 10>;

struct InfiniteSample {};

struct RuleResult {
  double value;
  double error;  ///< Kronrod-Gauss difference: shrinks under bisection
  double floor;  ///< roundoff level: does not
};

// One application of the 21-point Kronrod rule with embedded 10-point Gauss rule.
RuleResult apply_rule(const RealFunction& f, double lo, double hi, bool allow_inf, std::size_t& evals) {
  const auto& xk = Kronrod::abscissa();
  const auto& wk = Kronrod::weights();
  const auto& wg = Gauss::weights();
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);

  auto sample = [&](double x) {
    const double t = mid + half * x;
    const double y = f(t);
    ++evals;
    if (std::isnan(y)) {
      std::ostringstream os;
      os.precision(17);
      os << "integrand returned NaN at t=" << t;
      throw EvaluationError(os.str());
    }
    if (std::isinf(y)) {
      if (allow_inf && y > 0) throw InfiniteSample{};
      std::ostringstream os;
      os.precision(17);
      os << "integrand returned a non-finite value at t=" << t;
      throw EvaluationError(os.str());
    }
    return y;
  };

  // N = 21 -> Gauss order 10 (even): Gauss nodes sit at the odd Kronrod indices.
  double fc = sample(0.0);
  double kronrod = fc * wk[0];
  double gauss = 0.0;
  for (std::size_t i = 1; i < xk.size(); ++i) {
    const double fp = sample(xk[i]);
    const double fm = sample(-xk[i]);
    kronrod += (fp + fm) * wk[i];
    if (i % 2 == 1) gauss += (fp + fm) * wg[i / 2];
  }
  const double value = kronrod * half;
  // Roundoff floor. Abscissae are only resolved to eps*|t|, which on a segment
  // much narrower than |t| limits the attainable relative accuracy.
  const double eps = std::numeric_limits<double>::epsilon();
  const double quantization = 4.0 * eps * std::max(std::fabs(lo), std::fabs(hi)) / (hi - lo);
  return {value, std::fabs((kronrod - gauss) * half), (50.0 * eps + quantization) * std::fabs(value)};
}

struct Segment {
  double lo, hi, value, error, floor;
  bool operator<(const Segment& o) const { return error < o.error; }
};

}  // namespace

SegmentIntegral integrate_segment(const RealFunction& f, double lo, double hi, double tol, double abs_tol,
                                  bool allow_infinite_values, std::size_t& evaluations,
                                  std::size_t max_evaluations) {
  if (!(lo < hi)) return {};
  try {
    auto first = apply_rule(f, lo, hi, allow_infinite_values, evaluations);
    std::priority_queue<Segment> heap;
    heap.push({lo, hi, first.value, first.error, first.floor});
    double total = first.value;
    double total_err = first.error;
    double total_floor = first.floor;
    constexpr std::size_t kMaxSegments = 4000;
    // Refine while the bisectable error exceeds both the target and the roundoff level.
    while (total_err > std::max({abs_tol, tol * std::fabs(total), total_floor})) {
      if (heap.size() >= kMaxSegments || evaluations >= max_evaluations)
        throw BudgetExceededError("adaptive Gauss-Kronrod budget exhausted", total, total_err + total_floor);
      Segment worst = heap.top();
      const double mid = 0.5 * (worst.lo + worst.hi);
      if (!(worst.lo < mid && mid < worst.hi)) {
        // Resolution limit: this segment cannot be refined further.
        if (total_err - worst.error <= std::max(abs_tol, tol * std::fabs(total))) break;
        throw BudgetExceededError("segment reached floating-point resolution", total, total_err + total_floor);
      }
      heap.pop();
      auto left = apply_rule(f, worst.lo, mid, allow_infinite_values, evaluations);
      auto right = apply_rule(f, mid, worst.hi, allow_infinite_values, evaluations);
      total += left.value + right.value - worst.value;
      total_err += left.error + right.error - worst.error;
      total_floor += left.floor + right.floor - worst.floor;
      heap.push({worst.lo, mid, left.value, left.error, left.floor});
      heap.push({mid, worst.hi, right.value, right.error, right.floor});
    }
    // Recompute the sums from the leaves to shed accumulated cancellation.
    double sum = 0.0, err = 0.0;
    while (!heap.empty()) {
      sum += heap.top().value;
      err += heap.top().error + heap.top().floor;
      heap.pop();
    }
    return {sum, err, false};
  } catch (const InfiniteSample&) {
    return {kInf, 0.0, true};
  }
}

namespace {

struct HalfResult {
  double value = 0.0;
  double error = 0.0;
  bool diverged = false;
  bool marginal = false;
};

// Sweep from the finite anchor c toward the end e by dyadic annuli.
HalfResult integrate_toward(const RealFunction& f, double c, double e, const QuadratureOptions& opts,
                            std::size_t& evals) {
  HalfResult out;
  const bool infinite_end = std::isinf(e);
  const double dir = (e > c) ? 1.0 : -1.0;
  const double span = infinite_end ? std::max(1.0, std::fabs(c)) : std::fabs(e - c);
  // Closest distance to a finite end that is still representable distinctly from e.
  const double min_dist = (e == 0.0) ? 1e-290 : 16.0 * std::numeric_limits<double>::epsilon() * std::fabs(e);
  const double max_reach = 1e300;

  const auto& pol = opts.divergence;
  std::vector<double> inc;
  int non_contracting = 0;
  double min_ratio_in_run = kInf;

  for (int j = 0;; ++j) {
    double lo, hi;
    bool last = false;
    bool sliver = false;
    if (infinite_end) {
      const double d0 = span * (std::ldexp(1.0, j) - 1.0);
      const double d1 = span * (std::ldexp(1.0, j + 1) - 1.0);
      if (d1 > max_reach || c + dir * d1 == c + dir * d0) last = true;
      lo = c + dir * d0;
      hi = c + dir * d1;
    } else {
      const double d0 = span * std::ldexp(1.0, -j);
      double d1 = span * std::ldexp(1.0, -j - 1);
      if (d1 < min_dist) {
        last = true;
        // Too few annuli for a tail extrapolation: take the sliver up to e directly.
        sliver = j < 2;
      }
      lo = e - dir * d0;
      hi = sliver ? std::nextafter(e, c) : e - dir * d1;
    }
    if (lo > hi) std::swap(lo, hi);

    const double local_abs = std::max(opts.abs_tol, 0.05 * opts.tol * out.value);
    auto seg = integrate_segment(f, lo, hi, 0.25 * opts.tol, local_abs, opts.allow_infinite_values, evals,
                                 opts.max_evaluations);
    if (seg.hit_infinity) {
      out.value = kInf;
      out.diverged = true;
      return out;
    }
    const double d = seg.value;
    out.value += d;
    out.error += seg.error;
    inc.push_back(d);

    if (out.value > pol.cap) {
      out.value = kInf;
      out.diverged = true;
      return out;
    }

    const std::size_t n = inc.size();
    if (n >= 2 && inc[n - 2] > 0.0) {
      const double rho = d / inc[n - 2];
      if (rho >= 1.0 - pol.delta) {
        ++non_contracting;
        min_ratio_in_run = std::min(min_ratio_in_run, rho);
      } else {
        non_contracting = 0;
        min_ratio_in_run = kInf;
      }
      if (non_contracting >= pol.consecutive) {
        out.marginal = min_ratio_in_run < 1.0 - 0.5 * pol.delta;
        out.value = kInf;
        out.diverged = true;
        return out;
      }
    }

    if (sliver) return out;
    if (n >= 4 && inc[n - 1] == 0.0 && inc[n - 2] == 0.0 && inc[n - 3] == 0.0 && inc[n - 4] == 0.0) return out;

    double tail = kInf;
    if (n >= 3 && inc[n - 2] > 0.0 && inc[n - 3] > 0.0) {
      const double rho = std::max(inc[n - 1] / inc[n - 2], inc[n - 2] / inc[n - 3]);
      if (rho < 1.0) tail = inc[n - 1] * rho / (1.0 - rho);
    }
    const double target = std::max(opts.abs_tol, 0.25 * opts.tol * out.value);
    if (tail <= target) {
      out.value += tail;
      out.error += 0.5 * tail;
      return out;
    }
    if (last) {
      // Positions cannot get closer to the end; a contracting tail is taken
      // from its geometric extrapolation (exact for power-type behaviour).
      if (std::isfinite(tail)) {
        out.value += tail;
        out.error += 0.5 * tail;
        return out;
      }
      if (n >= 2 && inc[n - 1] == 0.0) return out;
      // Noisy neighbouring ratios: use the mean contraction over the run.
      if (n >= 3 && inc[0] > 0.0 && inc[n - 1] > 0.0) {
        const double mean = std::pow(inc[n - 1] / inc[0], 1.0 / double(n - 1));
        if (mean < 1.0 - pol.delta) {
          const double rest = inc[n - 1] * mean / (1.0 - mean);
          out.value += rest;
          out.error += rest;
          return out;
        }
      }
      // A run this short spans only a few ulps; what is left is one more
      // annulus of the same width.
      if (n < static_cast<std::size_t>(pol.consecutive)) {
        out.value += inc[n - 1];
        out.error += inc[n - 1];
        return out;
      }
      throw BudgetExceededError("improper integral did not settle before the resolution limit", out.value, kInf);
    }
    if (evals >= opts.max_evaluations)
      throw BudgetExceededError("evaluation budget exhausted", out.value, out.error);
  }
}

}  // namespace

QuadratureResult integrate(const RealFunction& f, Interval domain, const QuadratureOptions& opts) {
  if (!(opts.tol > 0.0)) throw DomainError("integrate: tolerance must be positive");

  std::vector<double> cuts{domain.a()};
  for (double bp : opts.breakpoints)
    if (domain.contains(bp)) cuts.push_back(bp);
  cuts.push_back(domain.b());
  std::sort(cuts.begin() + 1, cuts.end() - 1);
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  QuadratureResult res;
  double total = 0.0, err = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const Interval piece(cuts[i], cuts[i + 1]);
    const double c = piece.anchor();
    for (double e : {piece.a(), piece.b()}) {
      auto half = integrate_toward(f, c, e, opts, res.evaluations);
      if (half.diverged) {
        res.value = ExtendedReal::infinity();
        res.diverged = true;
        res.marginal = half.marginal;
        res.error_estimate = 0.0;
        return res;
      }
      total += half.value;
      err += half.error;
    }
  }
  res.value = total;
  res.error_estimate = err;
  return res;
}

}  // namespace chcert
