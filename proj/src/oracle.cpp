// SPDX-License-Identifier: Apache-2.0
#include "chcert/oracle.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <functional>
#include <random>

#include "chcert/errors.hpp"
#include "chcert/supremum.hpp"

namespace chcert {

// ---------------------------------------------------------------------------
// TestFunction

TestFunction::TestFunction(std::vector<double> b, std::vector<double> v) : breaks(std::move(b)), values(std::move(v)) {
  if (breaks.size() != values.size() + 1) throw DomainError("TestFunction: need one more break than values");
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
    if (!(breaks[i] < breaks[i + 1])) throw DomainError("TestFunction: breaks must increase strictly");
  for (double x : values)
    if (!(x >= 0.0) || std::isinf(x)) throw DomainError("TestFunction: values must be finite and nonnegative");
}

TestFunction TestFunction::indicator(double lo, double hi, double height) { return TestFunction({lo, hi}, {height}); }

double TestFunction::integral() const {
  double s = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) s += values[i] * (breaks[i + 1] - breaks[i]);
  return s;
}

bool TestFunction::usable() const {
  return std::any_of(values.begin(), values.end(), [](double x) { return x > 0.0; });
}

TestFunction TestFunction::scaled(double lambda) const {
  TestFunction g = *this;
  for (double& x : g.values) x *= lambda;
  return g;
}

TestFunction TestFunction::reflected() const {
  TestFunction g;
  g.breaks.assign(breaks.rbegin(), breaks.rend());
  for (double& x : g.breaks) x = -x;
  g.values.assign(values.rbegin(), values.rend());
  return g;
}

void TestFunction::validate(const Interval& domain) const {
  if (breaks.size() != values.size() + 1 || values.empty())
    throw DomainError("TestFunction: need at least one cell and one more break than values");
  for (std::size_t i = 0; i < breaks.size(); ++i) {
    if (!std::isfinite(breaks[i]) || !domain.contains_closure(breaks[i]))
      throw DomainError("TestFunction: breaks must be finite and inside the domain");
    if (i > 0 && !(breaks[i - 1] < breaks[i])) throw DomainError("TestFunction: breaks must increase strictly");
  }
  for (double x : values)
    if (!(x >= 0.0) || std::isinf(x)) throw DomainError("TestFunction: values must be finite and nonnegative");
}

// ---------------------------------------------------------------------------
// Evaluation core: always the canonical nesting, in the coordinates where the
// innermost integral runs from the left end.

namespace {

using Gauss10 = boost::math::quadrature::gauss<double, 10>;

template <class F>
double gauss10(F&& f, double lo, double hi) {
  const auto& x = Gauss10::abscissa();
  const auto& wt = Gauss10::weights();
  const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += wt[i] * (f(mid - half * x[i]) + f(mid + half * x[i]));
  return s * half;
}

struct Panel {
  double lo, hi, val;
};

constexpr std::size_t kSegmentBudget = 20'000'000;

class Core {
 public:
  Core(const ProblemInstance& inst, double tol)
      : tol_(tol),
        mirrored_(inst.form == Form::Swapped),
        unit_inner_(inst.form == Form::RhsWeighted),
        tr_(mirrored_ ? WeightTriple(inst.triple.u.reflected(), inst.triple.v.reflected(), inst.triple.w.reflected())
                      : inst.triple),
        dom_(tr_.domain()),
        bps_(tr_.breakpoints()) {
    inst.validate();
    const auto& P = inst.params;
    if (unit_inner_) {
      p_ = 1.0;
      rhs_power_ = P.p;
    } else {
      p_ = P.p;
    }
    q_ = P.q;
    r_ = P.r;
  }

  const Interval& domain() const { return dom_; }
  const WeightTriple& triple() const { return tr_; }
  bool mirrored() const { return mirrored_; }
  double p() const { return p_; }
  bool unit_inner() const { return unit_inner_; }
  double rhs_power() const { return rhs_power_; }

  double rhs(const TestFunction& f) const {
    if (!unit_inner_) return f.integral();
    double s = 0.0;
    for (std::size_t i = 0; i < f.cells(); ++i) {
      if (f.values[i] == 0.0) continue;
      s += ext::mul(std::pow(f.values[i], rhs_power_), tr_.v.integral(f.breaks[i], f.breaks[i + 1]).value());
    }
    return ext::pow(s, 1.0 / rhs_power_);
  }

  double lhs(const TestFunction& f, EvalMode mode) const {
    auto pn = panels(f, dom_);
    const double c0 = f.breaks.front(), cn = f.breaks.back();
    Middle m = middle(pn, mode, cn < dom_.b() ? tr_.u.integral(cn, dom_.b()).value() : 0.0);
    if (std::isinf(m.Fn) || std::isinf(m.J.front())) return kInf;
    const double rq = r_ / q_;
    double total = 0.0;
    if (c0 > dom_.a()) total += ext::mul(ext::pow(m.J.front(), rq), tr_.w.integral(dom_.a(), c0).value());
    if (std::isinf(total)) return kInf;
    for (std::size_t j = 0; j < pn.size(); ++j) {
      const auto g = integrand(pn[j], m.F[j]);
      const double Jhi = m.J[j + 1];
      const Panel& P = pn[j];
      auto outer = [&](double t, double inner) { return ext::mul(ext::pow(Jhi + inner, rq), tr_.w(t)); };
      double piece;
      if (mode == EvalMode::Fast) {
        piece = gauss10([&](double t) { return outer(t, gauss10(g, t, P.hi)); }, P.lo, P.hi);
      } else {
        piece = segment([&](double t) { return outer(t, segment(g, t, P.hi, 0.1 * tol_)); }, P.lo, P.hi, tol_);
      }
      total += piece;
      if (std::isinf(total)) return kInf;
    }
    if (cn < dom_.b() && m.Fn > 0.0) total += ext::mul(ext::pow(m.Fn, r_ / p_), H()(cn));
    return ext::pow(total, 1.0 / r_);
  }

  double local(const TestFunction& f, double lo, double hi, EvalMode mode) const {
    const Interval cell(lo, hi);
    auto pn = panels(f, cell);
    const double cn = f.breaks.back();
    Middle m = middle(pn, mode, cn < hi ? tr_.u.integral(cn, hi).value() : 0.0);
    return ext::pow(m.J.front(), 1.0 / q_);
  }

 private:
  struct Middle {
    std::vector<double> F;  ///< inner primitive at panel starts
    double Fn = 0.0;        ///< ... at the end of the support
    std::vector<double> J;  ///< middle layer at panel boundaries, J.size() = panels + 1
  };

  double vint(double lo, double s) const { return unit_inner_ ? s - lo : tr_.v.integral(lo, s).value(); }

  std::function<double(double)> integrand(const Panel& P, double F0) const {
    const double qp = q_ / p_;
    const double coef = P.val == 0.0 ? 0.0 : std::pow(P.val, p_);
    return [this, P, F0, qp, coef](double s) {
      const double F = coef == 0.0 ? F0 : F0 + ext::mul(coef, vint(P.lo, s));
      return ext::mul(ext::pow(F, qp), tr_.u(s));
    };
  }

  double segment(const std::function<double(double)>& g, double lo, double hi, double tol) const {
    std::size_t evals = 0;
    auto s = integrate_segment(g, lo, hi, tol, 0.0, true, evals, kSegmentBudget);
    return s.hit_infinity ? kInf : s.value;
  }

  Middle middle(const std::vector<Panel>& pn, EvalMode mode, double u_tail) const {
    Middle m;
    m.F.resize(pn.size());
    double F = 0.0;
    for (std::size_t j = 0; j < pn.size(); ++j) {
      m.F[j] = F;
      if (pn[j].val > 0.0) F += ext::mul(std::pow(pn[j].val, p_), vint(pn[j].lo, pn[j].hi));
    }
    m.Fn = F;
    m.J.assign(pn.size() + 1, 0.0);
    double J = ext::mul(ext::pow(F, q_ / p_), u_tail);
    m.J[pn.size()] = J;
    for (std::size_t j = pn.size(); j-- > 0;) {
      const auto g = integrand(pn[j], m.F[j]);
      J += mode == EvalMode::Fast ? gauss10(g, pn[j].lo, pn[j].hi) : segment(g, pn[j].lo, pn[j].hi, 0.1 * tol_);
      m.J[j] = J;
    }
    return m;
  }

  // Local length scale: distance to the nearest finite end or weight breakpoint,
  // and 1 + |t| when an end is infinite.
  double scale(double t, const Interval& d) const {
    double s = kInf;
    if (d.left_finite()) s = std::min(s, t - d.a());
    if (d.right_finite()) s = std::min(s, d.b() - t);
    if (!d.bounded()) s = std::min(s, 1.0 + std::fabs(t));
    const auto it = std::lower_bound(bps_.begin(), bps_.end(), t);
    if (it != bps_.end()) s = std::min(s, *it - t);
    if (it != bps_.begin()) s = std::min(s, t - *(it - 1));
    return s;
  }

  void grade(double lo, double hi, double val, int depth, const Interval& d, std::vector<Panel>& out) const {
    const double mid = lo + 0.5 * (hi - lo);
    const double floor = 1e-9 * std::max({1.0, std::fabs(lo), std::fabs(hi)});
    if (depth >= 64 || hi - lo <= floor || hi - lo <= scale(mid, d)) {
      out.push_back({lo, hi, val});
      return;
    }
    grade(lo, mid, val, depth + 1, d, out);
    grade(mid, hi, val, depth + 1, d, out);
  }

  std::vector<Panel> panels(const TestFunction& f, const Interval& d) const {
    f.validate(d);
    std::vector<Panel> out;
    for (std::size_t i = 0; i < f.cells(); ++i) {
      const double lo = f.breaks[i], hi = f.breaks[i + 1];
      std::vector<double> cuts{lo};
      for (double bp : bps_)
        if (lo < bp && bp < hi) cuts.push_back(bp);
      cuts.push_back(hi);
      for (std::size_t j = 0; j + 1 < cuts.size(); ++j) grade(cuts[j], cuts[j + 1], f.values[i], 0, d, out);
    }
    return out;
  }

  const TailIntegral& H() const {
    if (!H_) {
      const double e = r_ / q_;
      const double b = dom_.b();
      H_.emplace([this, e, b](double s) { return ext::mul(tr_.w(s), ext::pow(tr_.u.integral(s, b).value(), e)); },
                 dom_, composite_grid(dom_, 512, bps_), tol_, bps_);
    }
    return *H_;
  }

  double tol_;
  bool mirrored_;
  bool unit_inner_;
  WeightTriple tr_;
  Interval dom_;
  std::vector<double> bps_;
  double p_ = 1.0, q_ = 1.0, r_ = 1.0;
  double rhs_power_ = 1.0;
  mutable std::optional<TailIntegral> H_;
};

}  // namespace

struct RatioEvaluator::Impl {
  ProblemInstance inst;
  Core core;
  Impl(const ProblemInstance& i, double tol) : inst(i), core(i, tol) {}
  TestFunction to_core(const TestFunction& f) const {
    f.validate(inst.domain());
    return core.mirrored() ? f.reflected() : f;
  }
};

RatioEvaluator::RatioEvaluator(const ProblemInstance& inst, double tol) : impl_(std::make_unique<Impl>(inst, tol)) {}
RatioEvaluator::~RatioEvaluator() = default;
RatioEvaluator::RatioEvaluator(RatioEvaluator&&) noexcept = default;

const ProblemInstance& RatioEvaluator::instance() const { return impl_->inst; }

ExtendedReal RatioEvaluator::lhs(const TestFunction& f, EvalMode mode) const {
  return impl_->core.lhs(impl_->to_core(f), mode);
}

ExtendedReal RatioEvaluator::rhs(const TestFunction& f) const { return impl_->core.rhs(impl_->to_core(f)); }

ExtendedReal RatioEvaluator::ratio(const TestFunction& f, EvalMode mode) const {
  const auto g = impl_->to_core(f);
  const double den = impl_->core.rhs(g);
  if (!(den > 0.0) || std::isinf(den)) return 0.0;
  return ext::div(impl_->core.lhs(g, mode), den);
}

ExtendedReal RatioEvaluator::local_lhs(const TestFunction& h, double lo, double hi, EvalMode mode) const {
  if (impl_->inst.form != Form::Canonical) throw InvalidRequestError("local_lhs: canonical instances only");
  return impl_->core.local(h, lo, hi, mode);
}

ExtendedReal eval_LHS(const TestFunction& f, const ProblemInstance& inst, double tol) {
  return RatioEvaluator(inst, tol).lhs(f, EvalMode::Accurate);
}

ExtendedReal eval_RHS(const TestFunction& f, const ProblemInstance& inst) { return RatioEvaluator(inst).rhs(f); }

// ---------------------------------------------------------------------------
// Search

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

struct Candidate {
  TestFunction f;
  double score = -1.0;
  std::string strategy;
  int family = -1;  ///< shrinking family index, -1 otherwise
};

// Aitken extrapolation from the last three terms.
std::optional<double> aitken(const std::vector<double>& s) {
  if (s.size() < 3) return std::nullopt;
  const double x0 = s[s.size() - 3], x1 = s[s.size() - 2], x2 = s[s.size() - 1];
  const double d1 = x1 - x0, d2 = x2 - x1;
  const double den = d2 - d1;
  if (!std::isfinite(x2)) return std::nullopt;
  if (den == 0.0 || std::fabs(den) < 1e-14 * std::fabs(x2)) return x2;
  const double lim = x2 - d2 * d2 / den;
  return std::isfinite(lim) ? lim : x2;
}

/// Objective: fast or accurate ratio of a candidate in search coordinates;
/// negative when the candidate has no positive finite right side.
using Objective = std::function<double(const TestFunction&, EvalMode)>;

class Search {
 public:
  Search(Objective obj, Interval dom, std::vector<double> extra, std::function<double(double)> profile,
         const OracleOptions& opts)
      : obj_(std::move(obj)), dom_(dom), profile_(std::move(profile)), opts_(opts) {
    build_points(extra);
  }

  OracleResult run() {
    OracleResult res;
    res.seed = opts_.seed;
    scan_cells();
    scan_shrinking();
    res.trace.push_back(best_score());
    combine();
    res.trace.push_back(best_score());
    for (std::size_t k = 0; k < opts_.restarts; ++k) {
      restart(k);
      res.trace.push_back(best_score());
    }
    if (!any_usable_) throw DegenerateInstanceError("no candidate has a positive finite right-hand side");

    // Final precision on the leading distinct candidates.
    Candidate best;
    double best_acc = -1.0;
    for (const auto& c : hall_) {
      double acc = eval(c.f, EvalMode::Accurate);
      if (acc > best_acc) {
        best_acc = acc;
        best = c;
      }
    }
    res.lower_bound = std::max(best_acc, 0.0);
    res.best_f = best.f;
    res.best_strategy = best.strategy;
    if (best.family >= 0) res.delta_limit = aitken(families_[std::size_t(best.family)]);
    res.evaluations = evals_;
    res.rejected = rejected_;
    return res;
  }

 private:
  double eval(const TestFunction& f, EvalMode mode) {
    ++evals_;
    try {
      const double v = obj_(f, mode);
      if (v >= 0.0) any_usable_ = true;
      return std::isnan(v) ? -1.0 : v;
    } catch (const NumericalError&) {
      ++rejected_;
      return -1.0;
    }
  }

  double best_score() const { return hall_.empty() ? 0.0 : std::max(0.0, hall_.front().score); }

  // Keeps the few best distinct candidates, best first.
  void offer(const TestFunction& f, double score, const char* strategy, int family = -1) {
    if (!(score > 0.0)) return;
    constexpr std::size_t kHall = 6;
    if (hall_.size() == kHall && score <= hall_.back().score) return;
    for (const auto& c : hall_)
      if (c.f == f) return;
    hall_.push_back({f, score, strategy, family});
    std::stable_sort(hall_.begin(), hall_.end(), [](const Candidate& x, const Candidate& y) { return x.score > y.score; });
    if (hall_.size() > kHall) hall_.pop_back();
  }

  double scale(double t) const {
    double s = kInf;
    if (dom_.left_finite()) s = std::min(s, t - dom_.a());
    if (dom_.right_finite()) s = std::min(s, dom_.b() - t);
    if (!dom_.bounded()) s = std::min(s, 1.0 + std::fabs(t));
    return s;
  }

  void build_points(const std::vector<double>& extra) {
    const int J = std::max(1, int(std::ceil(-std::log2(opts_.min_width))));
    const double a = dom_.a(), b = dom_.b();
    std::vector<double> pts, coarse;
    auto both = [&](double t) {
      pts.push_back(t);
      coarse.push_back(t);
    };
    if (dom_.bounded()) {
      const double L = b - a;
      both(a);
      both(b);
      for (int i = 1; i < 16; ++i) both(a + L * i / 16.0);
      for (int j = 1; j <= J; ++j) {
        const double d = L * std::ldexp(1.0, -j);
        pts.push_back(a + d);
        pts.push_back(b - d);
        if (j % 3 == 0) {
          coarse.push_back(a + d);
          coarse.push_back(b - d);
        }
      }
    } else {
      const double c = dom_.left_finite() ? a : dom_.right_finite() ? b : 0.0;
      if (!dom_.left_finite() && !dom_.right_finite()) both(0.0);
      else both(c);
      for (int j = -J; j <= J; ++j) {
        const double d = std::ldexp(1.0, j);
        const bool keep = (j % 3 == 0);
        for (double t : {c + d, c - d}) {
          if (!dom_.contains(t)) continue;
          pts.push_back(t);
          if (keep) coarse.push_back(t);
        }
      }
    }
    int n = 0;
    for (double t : extra) {
      if (!dom_.contains(t)) continue;
      pts.push_back(t);
      if ((n++) % 2 == 0) coarse.push_back(t);
    }
    auto tidy = [&](std::vector<double>& v) {
      v.erase(std::remove_if(v.begin(), v.end(), [&](double t) { return !std::isfinite(t) || !dom_.contains_closure(t); }),
              v.end());
      std::sort(v.begin(), v.end());
      v.erase(std::unique(v.begin(), v.end()), v.end());
    };
    tidy(pts);
    tidy(coarse);
    points_ = std::move(pts);
    coarse_ = std::move(coarse);
  }

  TestFunction profiled(double lo, double hi) const {
    constexpr int kSub = 8;
    std::vector<double> br(kSub + 1), val(kSub);
    for (int i = 0; i <= kSub; ++i) br[std::size_t(i)] = lo + (hi - lo) * i / kSub;
    br[kSub] = hi;
    // A cell only a few ulps wide cannot be subdivided.
    br.erase(std::unique(br.begin(), br.end()), br.end());
    if (br.size() < 2) return TestFunction::indicator(lo, hi);
    val.resize(br.size() - 1);
    for (std::size_t i = 0; i + 1 < br.size(); ++i) {
      const double m = 0.5 * (br[i] + br[i + 1]);
      const double y = profile_(m);
      val[i] = std::isfinite(y) && y > 0.0 ? y : 0.0;
    }
    return TestFunction(br, val);
  }

  // S1a: indicators (and extremal profiles) of every coarse pair.
  void scan_cells() {
    for (std::size_t i = 0; i < coarse_.size(); ++i)
      for (std::size_t j = i + 1; j < coarse_.size(); ++j) {
        const auto f = TestFunction::indicator(coarse_[i], coarse_[j]);
        offer(f, eval(f, EvalMode::Fast), "cells");
        if (profile_) {
          const auto g = profiled(coarse_[i], coarse_[j]);
          if (g.usable()) offer(g, eval(g, EvalMode::Fast), "profile");
        }
      }
  }

  // S1b: geometric families of shrinking cells at every point, each side.
  void scan_shrinking() {
    const int J = std::max(1, int(std::ceil(-std::log2(opts_.min_width))));
    for (double t : points_) {
      const double s = std::isfinite(scale(t)) && scale(t) > 0.0 ? scale(t) : 0.0;
      for (int side : {1, -1}) {
        double room = kInf;
        if (side > 0 && dom_.right_finite()) room = dom_.b() - t;
        if (side < 0 && dom_.left_finite()) room = t - dom_.a();
        double L = s > 0.0 ? s : room;
        if (!std::isfinite(L)) L = 1.0 + std::fabs(t);
        L = std::min(L, room);
        if (!(L > 0.0)) continue;
        std::vector<double> fam;
        const int id = int(families_.size());
        for (int j = 1; j <= J; ++j) {
          const double d = L * std::ldexp(1.0, -j);
          const double lo = side > 0 ? t : t - d, hi = side > 0 ? t + d : t;
          if (!(lo < hi)) break;
          const auto f = TestFunction::indicator(lo, hi, 1.0 / d);
          const double v = eval(f, EvalMode::Fast);
          fam.push_back(v);
          offer(f, v, "shrinking", id);
        }
        families_.push_back(std::move(fam));
      }
    }
  }

  static TestFunction superpose(const std::vector<TestFunction>& hs, const std::vector<double>& a) {
    std::vector<double> br;
    for (std::size_t m = 0; m < hs.size(); ++m)
      if (a[m] > 0.0) br.insert(br.end(), hs[m].breaks.begin(), hs[m].breaks.end());
    std::sort(br.begin(), br.end());
    br.erase(std::unique(br.begin(), br.end()), br.end());
    std::vector<double> val(br.size() - 1, 0.0);
    for (std::size_t i = 0; i + 1 < br.size(); ++i) {
      const double mid = 0.5 * (br[i] + br[i + 1]);
      for (std::size_t m = 0; m < hs.size(); ++m) {
        if (a[m] == 0.0) continue;
        const auto& h = hs[m];
        const auto it = std::upper_bound(h.breaks.begin(), h.breaks.end(), mid);
        if (it == h.breaks.begin() || it == h.breaks.end()) continue;
        val[i] += a[m] * h.values[std::size_t(it - h.breaks.begin()) - 1];
      }
    }
    return TestFunction(br, val);
  }

  // S2: nonnegative combinations of the leading single candidates, by
  // multiplicative coordinate ascent on the coefficients.
  void combine() {
    if (hall_.size() < 2) return;
    std::vector<TestFunction> hs;
    std::vector<double> a;
    for (const auto& c : hall_) {
      const double mass = c.f.integral();
      if (!(mass > 0.0)) continue;
      hs.push_back(c.f.scaled(1.0 / mass));
      a.push_back(c.score / hall_.front().score);
    }
    if (hs.size() < 2) return;
    double cur = eval(superpose(hs, a), EvalMode::Fast);
    double step = 2.0;
    for (std::size_t it = 0; it < opts_.steps && step > 1.0 + 1e-3; ++it) {
      bool improved = false;
      for (std::size_t m = 0; m < hs.size(); ++m) {
        for (double fac : {step, 1.0 / step, 0.0}) {
          auto trial = a;
          trial[m] = a[m] == 0.0 ? (fac == 0.0 ? 0.0 : 1.0 / fac) * 1e-3 : a[m] * fac;
          if (std::none_of(trial.begin(), trial.end(), [](double x) { return x > 0.0; })) continue;
          const auto f = superpose(hs, trial);
          const double v = eval(f, EvalMode::Fast);
          if (v > cur) {
            cur = v;
            a = trial;
            improved = true;
            offer(f, v, "combination");
          }
        }
      }
      if (!improved) step = std::sqrt(step);
    }
  }

  double chart(double xi) const {
    const double a = dom_.a(), b = dom_.b();
    if (dom_.bounded()) return a + (b - a) * xi;
    if (dom_.left_finite()) return a + xi / (1.0 - xi);
    if (dom_.right_finite()) return b - (1.0 - xi) / xi;
    return std::tan(M_PI * (xi - 0.5));
  }

  // S3: one random step-function restart with multiplicative ascent on values.
  void restart(std::size_t k) {
    std::mt19937_64 eng(splitmix64(opts_.seed ^ splitmix64(0xA5A5'0000ull + k)));
    std::uniform_real_distribution<double> U01(0.0, 1.0);
    std::normal_distribution<double> N01(0.0, 1.0);
    const std::size_t n = 1 + std::size_t(eng() % 8);
    std::vector<double> br;
    while (br.size() < n + 1) {
      double t;
      if (U01(eng) < 0.5 && !points_.empty()) {
        t = points_[std::size_t(eng() % points_.size())];
      } else {
        t = chart(std::clamp(U01(eng), 1e-12, 1.0 - 1e-12));
      }
      if (!dom_.contains_closure(t) || !std::isfinite(t)) continue;
      br.push_back(t);
      std::sort(br.begin(), br.end());
      br.erase(std::unique(br.begin(), br.end()), br.end());
    }
    std::vector<double> val(n);
    for (double& v : val) v = std::exp(N01(eng));
    TestFunction f(br, val);
    double cur = eval(f, EvalMode::Fast);
    offer(f, cur, "restart");
    double sigma = 1.0;
    for (std::size_t s = 0; s < opts_.steps; ++s) {
      const std::size_t i = std::size_t(eng() % n);
      auto g = f;
      g.values[i] *= std::exp(sigma * N01(eng));
      const double v = eval(g, EvalMode::Fast);
      if (v > cur) {
        cur = v;
        f = std::move(g);
        offer(f, cur, "restart");
      } else {
        sigma = std::max(0.05, sigma * 0.98);
      }
    }
  }

  Objective obj_;
  Interval dom_;
  std::function<double(double)> profile_;
  OracleOptions opts_;
  std::vector<double> points_, coarse_;
  std::vector<Candidate> hall_;
  std::vector<std::vector<double>> families_;
  std::size_t evals_ = 0;
  std::size_t rejected_ = 0;
  bool any_usable_ = false;
};

void check_budget(const OracleOptions& o) {
  if (o.restarts == 0) throw DomainError("oracle: budget (restarts) must be positive");
  if (o.steps == 0) throw DomainError("oracle: steps must be positive");
  if (!(o.min_width > 0.0 && o.min_width < 1.0)) throw DomainError("oracle: min_width must lie in (0, 1)");
}

std::vector<double> level_points(const WeightExpr& w, const OracleOptions& o) {
  try {
    return discretizing_sequence(w, o.k_min, o.k_cap, 1e-10).x;
  } catch (const Error&) {
    return {};
  }
}

}  // namespace

OracleResult maximize_ratio(const ProblemInstance& inst, const OracleOptions& opts) {
  check_budget(opts);
  auto core = std::make_shared<Core>(inst, opts.tol);
  const auto& tr = core->triple();
  auto extra = level_points(tr.w, opts);
  for (double bp : tr.breakpoints()) extra.push_back(bp);

  std::function<double(double)> profile;
  if (!core->unit_inner() && core->p() < 1.0) {
    const double e = 1.0 / (1.0 - core->p());
    profile = [core, e](double t) { return std::pow(core->triple().v(t), e); };
  } else if (core->unit_inner() && core->rhs_power() > 1.0) {
    const double e = -1.0 / (core->rhs_power() - 1.0);
    profile = [core, e](double t) { return std::pow(core->triple().v(t), e); };
  }
  Objective obj = [core](const TestFunction& f, EvalMode mode) {
    const double den = core->rhs(f);
    if (!(den > 0.0) || std::isinf(den)) return -1.0;
    return ext::div(core->lhs(f, mode), den);
  };
  Search search(obj, core->domain(), extra, profile, opts);
  auto res = search.run();
  if (core->mirrored()) res.best_f = res.best_f.reflected();
  return res;
}

OracleResult maximize_ratio(const WeightTriple& triple, const Parameters& params, std::size_t budget,
                            std::uint64_t seed) {
  OracleOptions o;
  o.restarts = budget;
  o.seed = seed;
  return maximize_ratio(ProblemInstance(Form::Canonical, params, triple), o);
}

OracleResult local_B(int k, const WeightTriple& triple, const Parameters& params, const DiscretizingSequence& seq,
                     const OracleOptions& opts) {
  check_budget(opts);
  if (!(k > seq.k_min && k <= seq.k_top)) throw InvalidRequestError("local_B: cell index outside the stored window");
  const double lo = seq.at(k - 1), hi = seq.at(k);
  auto core = std::make_shared<Core>(ProblemInstance(Form::Canonical, params, triple), opts.tol);
  const Interval cell(lo, hi);
  std::vector<double> extra;
  for (double bp : triple.breakpoints())
    if (cell.contains(bp)) extra.push_back(bp);
  std::function<double(double)> profile;
  if (params.p < 1.0) {
    const double e = 1.0 / (1.0 - params.p);
    profile = [core, e](double t) { return std::pow(core->triple().v(t), e); };
  }
  Objective obj = [core, lo, hi](const TestFunction& h, EvalMode mode) {
    const double den = h.integral();
    if (!(den > 0.0)) return -1.0;
    return ext::div(core->local(h, lo, hi, mode), den);
  };
  Search search(obj, cell, extra, profile, opts);
  return search.run();
}

}  // namespace chcert
