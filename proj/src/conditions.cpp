// SPDX-License-Identifier: Apache-2.0
#include "chcert/conditions.hpp"

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <sstream>

#include "chcert/errors.hpp"

namespace chcert {

void Parameters::validate() const {
  if (!(p > 0.0 && p <= 1.0)) throw DomainError("parameters: p must lie in (0, 1]");
  if (!(q > 0.0) || std::isinf(q)) throw DomainError("parameters: q must be positive and finite");
  if (!(r > 0.0) || std::isinf(r)) throw DomainError("parameters: r must be positive and finite");
}

Regime classify_regime(const Parameters& params) {
  const bool r_ge = params.r >= 1.0, q_ge = params.q >= 1.0;
  if (r_ge) return q_ge ? Regime::I : Regime::II;
  return q_ge ? Regime::III : Regime::IV;
}

std::string to_string(Regime r) {
  switch (r) {
    case Regime::I: return "I";
    case Regime::II: return "II";
    case Regime::III: return "III";
    case Regime::IV: return "IV";
  }
  return "?";
}

std::array<int, 2> regime_pair(Regime r) {
  switch (r) {
    case Regime::I: return {1, 2};
    case Regime::II: return {2, 3};
    case Regime::III: return {4, 5};
    case Regime::IV: return {5, 6};
  }
  return {1, 2};
}

std::string to_string(TailStatus s) {
  switch (s) {
    case TailStatus::Ok: return "ok";
    case TailStatus::Warning: return "warning";
    case TailStatus::Dominated: return "dominated";
  }
  return "?";
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Finite: return "finite";
    case Verdict::Infinite: return "infinite";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// TailIntegral

TailIntegral::TailIntegral(RealFunction g, Interval domain, const std::vector<double>& grid, double tol,
                           std::vector<double> breakpoints)
    : g_(std::move(g)), domain_(domain), grid_(grid), breakpoints_(std::move(breakpoints)), tol_(tol) {
  if (grid_.empty()) throw DomainError("TailIntegral: empty grid");
  const std::size_t n = grid_.size();
  tail_.assign(n, 0.0);
  QuadratureOptions o;
  o.tol = tol_;
  o.allow_infinite_values = true;
  o.breakpoints = breakpoints_;
  auto right = integrate(g_, Interval(grid_.back(), domain_.b()), o);
  marginal_ = right.marginal;
  double acc = right.value.value();
  tail_[n - 1] = acc;
  for (std::size_t i = n - 1; i-- > 0;) {
    if (!std::isinf(acc)) acc += segment(grid_[i], grid_[i + 1]);
    tail_[i] = acc;
  }
  diverged_ = std::isinf(tail_.front());
}

double TailIntegral::segment(double lo, double hi) const {
  const bool straddles =
      std::any_of(breakpoints_.begin(), breakpoints_.end(), [&](double bp) { return lo < bp && bp < hi; });
  if (straddles) {
    QuadratureOptions o;
    o.tol = tol_;
    o.allow_infinite_values = true;
    o.breakpoints = breakpoints_;
    auto r = integrate(g_, Interval(lo, hi), o);
    marginal_ = marginal_ || r.marginal;
    return r.value.value();
  }
  std::size_t evals = 0;
  auto seg = integrate_segment(g_, lo, hi, 0.1 * tol_, 0.0, true, evals, 1u << 30);
  return seg.hit_infinity ? kInf : seg.value;
}

double TailIntegral::operator()(double t) const {
  if (!domain_.contains(t)) throw DomainError("TailIntegral: t outside the domain");
  if (t >= grid_.back()) {
    QuadratureOptions o;
    o.tol = tol_;
    o.allow_infinite_values = true;
    o.breakpoints = breakpoints_;
    return integrate(g_, Interval(t, domain_.b()), o).value.value();
  }
  const auto it = std::upper_bound(grid_.begin(), grid_.end(), t);
  const std::size_t j = std::size_t(it - grid_.begin());  // grid_[j] > t
  const double rest = tail_[j];
  if (std::isinf(rest)) return kInf;
  if (j == 0) {
    QuadratureOptions o;
    o.tol = tol_;
    o.allow_infinite_values = true;
    return rest + integrate(g_, Interval(t, grid_[0]), o).value.value();
  }
  return rest + segment(t, grid_[j]);
}

// ---------------------------------------------------------------------------
// Continuum constants

namespace {

struct Primitives {
  const WeightTriple& tr;
  Parameters par;
  VpEvaluator vp;
  double a, b;

  Primitives(const WeightTriple& t, const Parameters& p)
      : tr(t), par(p), vp(t.v, p.p), a(t.domain().a()), b(t.domain().b()) {}

  double W(double t) const { return tr.w.integral(a, t).value(); }
  double U(double t) const { return tr.u.integral(t, b).value(); }
  double V(double t) const { return vp(a, t); }
};

double prod(std::initializer_list<double> xs) {
  double r = 1.0;
  for (double x : xs) r = ext::mul(r, x);
  return r;
}

SupOptions sup_options(const WeightTriple& tr, const ConditionOptions& o) {
  SupOptions s;
  s.tol = o.tol;
  s.nodes = o.nodes;
  s.breakpoints = tr.breakpoints();
  s.divergence = o.divergence;
  return s;
}

QuadratureOptions quad_options(const WeightTriple& tr, const ConditionOptions& o) {
  QuadratureOptions q;
  q.tol = o.tol;
  q.breakpoints = tr.breakpoints();
  q.allow_infinite_values = true;
  q.divergence = o.divergence;
  return q;
}

ConstantValue from_sup(const SupResult& s) {
  ConstantValue c;
  c.value = s.value;
  c.diverged = s.diverged;
  c.marginal = s.marginal;
  c.converged = s.converged;
  return c;
}

ConstantValue from_integral(const QuadratureResult& q, double outer_power) {
  ConstantValue c;
  c.diverged = q.diverged;
  c.marginal = q.marginal;
  c.value = q.diverged ? kInf : ext::pow(q.value.value(), outer_power);
  c.error_estimate = q.diverged ? 0.0 : q.error_estimate;
  return c;
}

// H(t) = \int_t^b w U^{r/q}
TailIntegral make_H(const Primitives& P, const std::vector<double>& grid, double tol) {
  const double e = P.par.r / P.par.q;
  return TailIntegral([&P, e](double s) { return ext::mul(P.tr.w(s), ext::pow(P.U(s), e)); }, P.tr.domain(), grid,
                      tol, P.tr.breakpoints());
}

// G(t) = \int_t^b U^{q/(1-q)} u V^{q/(1-q)}
TailIntegral make_G(const Primitives& P, const std::vector<double>& grid, double tol) {
  const double e = P.par.q / (1.0 - P.par.q);
  return TailIntegral(
      [&P, e](double s) { return prod({ext::pow(P.U(s), e), P.tr.u(s), ext::pow(P.V(s), e)}); },
      P.tr.domain(), grid, tol, P.tr.breakpoints());
}

// Running right supremum Phi(t) = sup_{s > t} U(s)^{1/q} V(s), tabulated on the
// grid. Strict local maxima of the samples are refined by Brent and added to the
// table, so interior peaks are not clipped to the nearest node.
class RightSup {
 public:
  RightSup(const Primitives& P, const std::vector<double>& grid, const ConditionOptions& o) : P_(P) {
    SupOptions so;
    so.tol = o.tol;
    so.nodes = 64;
    so.divergence = o.divergence;
    auto tail = supremum([this](double s) { return phi(s); }, Interval(grid.back(), P_.b), so);
    marginal_ = tail.marginal;

    std::vector<double> vals(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) vals[i] = phi(grid[i]);
    std::vector<std::pair<double, double>> pts;
    pts.reserve(grid.size() + 16);
    for (std::size_t i = 0; i < grid.size(); ++i) pts.emplace_back(grid[i], vals[i]);
    for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
      if (!(vals[i] > vals[i - 1] && vals[i] > vals[i + 1]) || std::isinf(vals[i])) continue;
      auto neg = [this](double s) { return -phi(s); };
      std::uintmax_t iters = 200;
      const auto [x, fx] = boost::math::tools::brent_find_minima(neg, grid[i - 1], grid[i + 1], 50, iters);
      if (-fx > vals[i]) pts.emplace_back(x, -fx);
    }
    std::sort(pts.begin(), pts.end());
    grid_.resize(pts.size());
    suffix_.resize(pts.size());
    tail_ = tail.value.value();
    double m = tail_;
    for (std::size_t i = pts.size(); i-- > 0;) {
      m = std::max(m, pts[i].second);
      grid_[i] = pts[i].first;
      suffix_[i] = m;
    }
  }
  double phi(double s) const { return ext::mul(ext::pow(P_.U(s), 1.0 / P_.par.q), P_.V(s)); }
  double operator()(double t) const {
    const auto it = std::upper_bound(grid_.begin(), grid_.end(), t);
    const std::size_t j = std::size_t(it - grid_.begin());
    const double rest = j < grid_.size() ? suffix_[j] : tail_;
    return std::max(phi(t), rest);
  }
  bool marginal() const { return marginal_; }

 private:
  const Primitives& P_;
  std::vector<double> grid_;
  std::vector<double> suffix_;
  double tail_ = 0.0;  ///< sup of phi beyond the last grid node
  bool marginal_ = false;
};

}  // namespace

ConstantValue compute_C(int i, const WeightTriple& triple, const Parameters& params, const ConditionOptions& opts) {
  params.validate();
  if (i < 1 || i > 6) throw InvalidRequestError("compute_C: index must be 1..6");
  if ((i == 3 || i == 6) && !(params.q < 1.0))
    throw InvalidRequestError("C" + std::to_string(i) + " is defined only for q < 1");
  if (i >= 4 && !(params.r < 1.0)) throw InvalidRequestError("C" + std::to_string(i) + " is defined only for r < 1");

  const Primitives P(triple, params);
  const Interval dom = triple.domain();
  const double q = params.q, r = params.r;
  const auto grid = composite_grid(dom, opts.nodes, triple.breakpoints());
  const auto so = sup_options(triple, opts);
  const auto qo = quad_options(triple, opts);
  const double rho = (r < 1.0) ? r / (1.0 - r) : 0.0;

  // Set once the inner table is built; before that a budget failure says
  // nothing about the constant itself.
  bool outer = false;
  try {
    switch (i) {
      case 1: {
        // sup_t W(t)^{1/r} sup_{s>t} U(s)^{1/q} V(s) = sup_s W(s)^{1/r} U(s)^{1/q} V(s) since W is nondecreasing.
        auto f = [&](double s) { return prod({ext::pow(P.W(s), 1.0 / r), ext::pow(P.U(s), 1.0 / q), P.V(s)}); };
        outer = true;
        return from_sup(supremum(f, dom, so));
      }
      case 2: {
        const auto H = make_H(P, grid, opts.tol);
        auto f = [&](double t) { return ext::mul(ext::pow(H(t), 1.0 / r), P.V(t)); };
        outer = true;
        auto c = from_sup(supremum(f, dom, so));
        c.marginal = c.marginal || H.marginal();
        return c;
      }
      case 3: {
        const auto G = make_G(P, grid, opts.tol);
        const double e = (1.0 - q) / q;
        auto f = [&](double t) { return ext::mul(ext::pow(P.W(t), 1.0 / r), ext::pow(G(t), e)); };
        outer = true;
        auto c = from_sup(supremum(f, dom, so));
        c.marginal = c.marginal || G.marginal();
        return c;
      }
      case 4: {
        const RightSup Phi(P, grid, opts);
        auto f = [&](double t) { return prod({ext::pow(P.W(t), rho), triple.w(t), ext::pow(Phi(t), rho)}); };
        outer = true;
        auto c = from_integral(integrate(f, dom, qo), 1.0 / rho);
        c.marginal = c.marginal || Phi.marginal();
        return c;
      }
      case 5: {
        const auto H = make_H(P, grid, opts.tol);
        auto f = [&](double t) {
          return prod({ext::pow(H(t), rho), triple.w(t), ext::pow(P.U(t), r / q), ext::pow(P.V(t), rho)});
        };
        outer = true;
        auto c = from_integral(integrate(f, dom, qo), 1.0 / rho);
        c.marginal = c.marginal || H.marginal();
        return c;
      }
      case 6: {
        const auto G = make_G(P, grid, opts.tol);
        const double e = rho * (1.0 - q) / q;
        auto f = [&](double t) { return prod({ext::pow(P.W(t), rho), triple.w(t), ext::pow(G(t), e)}); };
        outer = true;
        auto c = from_integral(integrate(f, dom, qo), 1.0 / rho);
        c.marginal = c.marginal || G.marginal();
        return c;
      }
    }
  } catch (const BudgetExceededError& e) {
    ConstantValue c;
    const double power = (i <= 3) ? 1.0 : 1.0 / rho;
    // Without the outer stage no finite bound is known.
    c.value = outer ? ext::pow(std::max(0.0, e.best_estimate()), power) : kInf;
    c.converged = false;
    c.note = e.what();
    return c;
  }
  return {};
}

// ---------------------------------------------------------------------------
// Discrete constants

namespace {

// Geometric extrapolation of a truncated sum at one boundary: terms t0 (at the
// boundary) and t1 (next inward). Returns the estimated missing mass.
double sum_tail(double t0, double t1) {
  if (t0 == 0.0) return 0.0;
  if (!(t1 > t0)) return kInf;
  const double rho = t0 / t1;
  return t0 * rho / (1.0 - rho);
}

// Missing growth of a supremum whose argument still rises toward the boundary.
double sup_tail(double v0, double v1, double v2, double vmax) {
  if (vmax == 0.0 || v0 < vmax) return 0.0;
  const double d0 = v0 - v1, d1 = v1 - v2;
  if (d0 <= 0.0) return 0.0;
  if (!(d1 > d0)) return kInf;
  const double rho = d0 / d1;
  return d0 * rho / (1.0 - rho);
}

double frac(double tail, double total) {
  if (tail == 0.0) return 0.0;
  if (total == 0.0 || std::isinf(total)) return std::isinf(tail) && total == 0.0 ? kInf : 0.0;
  return tail / total;
}

DiscreteConstant sup_constant(const std::vector<double>& terms, bool lower_trunc, bool upper_trunc) {
  DiscreteConstant c;
  c.computed = true;
  double m = 0.0;
  for (double x : terms) m = std::max(m, x);
  c.value = m;
  if (std::isinf(m)) return c;
  const std::size_t n = terms.size();
  double tail = 0.0;
  if (lower_trunc && n >= 3) tail = std::max(tail, sup_tail(terms[0], terms[1], terms[2], m));
  if (upper_trunc && n >= 3) tail = std::max(tail, sup_tail(terms[n - 1], terms[n - 2], terms[n - 3], m));
  c.tail_fraction = frac(tail, m);
  return c;
}

DiscreteConstant sum_constant(const std::vector<double>& terms, double outer_power, bool lower_trunc,
                              bool upper_trunc) {
  DiscreteConstant c;
  c.computed = true;
  double s = 0.0;
  for (double x : terms) s += x;
  c.value = ext::pow(s, outer_power);
  if (std::isinf(s)) return c;
  const std::size_t n = terms.size();
  double tail = 0.0;
  if (lower_trunc && n >= 2) tail += sum_tail(terms[0], terms[1]);
  if (upper_trunc && n >= 2) tail += sum_tail(terms[n - 1], terms[n - 2]);
  c.tail_fraction = frac(tail, s);
  return c;
}

void classify(DiscreteConstant& c) {
  if (c.tail_fraction > kTailDominated) c.status = TailStatus::Dominated;
  else if (c.tail_fraction > kTailWarning) c.status = TailStatus::Warning;
  else c.status = TailStatus::Ok;
}

}  // namespace

DiscreteConstants compute_discrete_constants(const WeightTriple& triple, const Parameters& params,
                                             const DiscretizingSequence& seq, const ConditionOptions& opts,
                                             bool strict) {
  params.validate();
  if (!(seq.domain == triple.domain())) throw DomainError("discrete constants: sequence built on another interval");
  const int ncell = seq.cells();
  if (ncell < 1) throw DomainError("discrete constants: the sequence has no cells");
  const double q = params.q, r = params.r;
  const bool q_lt = q < 1.0, r_lt = r < 1.0;
  const double rho = r_lt ? r / (1.0 - r) : 0.0;
  const Primitives P(triple, params);
  const bool lo_tr = seq.lower_truncated, hi_tr = seq.upper_truncated;

  std::vector<double> s(ncell), I(ncell), UU(ncell), VV(ncell);
  for (int j = 0; j < ncell; ++j) {
    const int k = seq.k_min + j;
    const double xk = seq.at(k), xk1 = seq.at(k + 1);
    const Interval cell(xk, xk1);
    auto Uk = [&](double t) { return triple.u.integral(t, xk1).value(); };
    auto Vk = [&](double t) { return P.vp(xk, t); };
    {
      SupOptions so;
      so.tol = opts.tol;
      so.nodes = opts.cell_nodes;
      so.divergence = opts.divergence;
      for (double bp : triple.breakpoints())
        if (cell.contains(bp)) so.breakpoints.push_back(bp);
      auto f = [&](double t) { return ext::mul(ext::pow(Uk(t), 1.0 / q), Vk(t)); };
      s[j] = supremum(f, cell, so).value.value();
    }
    if (q_lt) {
      const double e = q / (1.0 - q);
      QuadratureOptions qo;
      qo.tol = opts.tol;
      qo.allow_infinite_values = true;
      qo.divergence = opts.divergence;
      for (double bp : triple.breakpoints())
        if (cell.contains(bp)) qo.breakpoints.push_back(bp);
      auto g = [&](double t) { return prod({ext::pow(Uk(t), e), triple.u(t), ext::pow(Vk(t), e)}); };
      try {
        I[j] = integrate(g, cell, qo).value.value();
      } catch (const BudgetExceededError& ex) {
        I[j] = ex.best_estimate();
      }
    }
    UU[j] = P.U(xk);
    VV[j] = P.V(xk);
  }

  auto two_k = [&](int j, double e) { return std::exp2(double(seq.k_min + j) * e); };
  DiscreteConstants out;

  // A1*, A3*: per-cell suprema.
  {
    std::vector<double> t(ncell);
    for (int j = 0; j < ncell; ++j) t[j] = ext::mul(two_k(j, 1.0 / r), s[j]);
    if (!r_lt) out.A[0] = sup_constant(t, lo_tr, hi_tr);
    if (r_lt) {
      std::vector<double> tp(ncell);
      for (int j = 0; j < ncell; ++j) tp[j] = ext::pow(t[j], rho);
      out.A[2] = sum_constant(tp, 1.0 / rho, lo_tr, hi_tr);
    }
  }
  // A2*, A4*: per-cell integrals.
  if (q_lt) {
    std::vector<double> t(ncell);
    for (int j = 0; j < ncell; ++j) t[j] = ext::mul(two_k(j, 1.0 / r), ext::pow(I[j], (1.0 - q) / q));
    if (!r_lt) out.A[1] = sup_constant(t, lo_tr, hi_tr);
    else {
      std::vector<double> tp(ncell);
      for (int j = 0; j < ncell; ++j) tp[j] = ext::pow(t[j], rho);
      out.A[3] = sum_constant(tp, 1.0 / rho, lo_tr, hi_tr);
    }
  }
  // B1*, B2*: level sums of 2^i U(x_i)^{r/q}.
  {
    std::vector<double> a(ncell), S(ncell);
    for (int j = 0; j < ncell; ++j) a[j] = ext::mul(two_k(j, 1.0), ext::pow(UU[j], r / q));
    double acc = 0.0;
    for (int j = ncell; j-- > 0;) {
      acc += a[j];
      S[j] = acc;
    }
    double inner_tail = 0.0;
    if (hi_tr && ncell >= 2) inner_tail = frac(sum_tail(a[ncell - 1], a[ncell - 2]), S[0]);
    if (!r_lt) {
      std::vector<double> t(ncell);
      for (int j = 0; j < ncell; ++j) t[j] = ext::mul(ext::pow(S[j], 1.0 / r), VV[j]);
      out.B[0] = sup_constant(t, lo_tr, false);
      out.B[0].tail_fraction = std::max(out.B[0].tail_fraction, inner_tail);
    } else {
      std::vector<double> t(ncell);
      for (int j = 0; j < ncell; ++j) t[j] = prod({a[j], ext::pow(S[j], rho), ext::pow(VV[j], rho)});
      out.B[1] = sum_constant(t, 1.0 / rho, lo_tr, false);
      out.B[1].tail_fraction = std::max(out.B[1].tail_fraction, inner_tail);
    }
  }

  for (auto* c : {&out.A[0], &out.A[1], &out.A[2], &out.A[3], &out.B[0], &out.B[1]}) {
    if (!c->computed) continue;
    classify(*c);
    if (strict && c->status == TailStatus::Dominated) {
      std::ostringstream os;
      os << "discrete constant dominated by its truncated tail (" << c->tail_fraction * 100.0
         << "% of the value); widen the discretization depth";
      throw TruncationError(os.str());
    }
  }
  return out;
}

ExtendedReal local_A(int k, const WeightTriple& triple, const Parameters& params, const DiscretizingSequence& seq) {
  if (k <= seq.k_min || k > seq.k_top)
    throw DomainError("local_A: level " + std::to_string(k) + " outside the stored range");
  return VpEvaluator(triple.v, params.p)(seq.at(k - 1), seq.at(k));
}

// ---------------------------------------------------------------------------
// Certificate

ExtendedReal estimate_best_constant(const ConstantsReport& report) {
  if (report.pathological) return ExtendedReal::infinity();
  const auto pair = regime_pair(report.regime);
  ExtendedReal s = 0.0;
  for (int i : pair) {
    const auto& c = report.C[std::size_t(i - 1)];
    if (!c) throw InvalidRequestError("estimate: C" + std::to_string(i) + " was not computed");
    s = s + c->value;
  }
  return s;
}

std::optional<ExtendedReal> discrete_estimate(const ConstantsReport& report) {
  if (!report.discrete) return std::nullopt;
  const auto& d = *report.discrete;
  switch (report.regime) {
    case Regime::I: return d.A[0].value + d.B[0].value;
    case Regime::II: return d.A[1].value + d.B[0].value;
    case Regime::III: return d.A[2].value + d.B[1].value;
    case Regime::IV: return d.A[3].value + d.B[1].value;
  }
  return std::nullopt;
}

ConstantsReport certify(const WeightTriple& triple, const Parameters& params, const ConditionOptions& opts) {
  params.validate();
  ConstantsReport rep;
  rep.params = params;
  rep.regime = classify_regime(params);
  rep.notes.push_back(
      "the estimate is equivalent to the best constant only up to factors depending on p, q, r that the "
      "characterization leaves unspecified");

  try {
    check_not_pathological(triple.w);
  } catch (const PathologicalWeightError& e) {
    rep.pathological = true;
    for (int i : regime_pair(rep.regime)) {
      ConstantValue c;
      c.value = ExtendedReal::infinity();
      c.diverged = true;
      c.note = "pathological outer weight";
      rep.C[std::size_t(i - 1)] = c;
    }
    rep.estimate = ExtendedReal::infinity();
    rep.holds = Verdict::Infinite;
    rep.notes.push_back(e.what());
    return rep;
  }

  for (int i : regime_pair(rep.regime)) rep.C[std::size_t(i - 1)] = compute_C(i, triple, params, opts);
  rep.estimate = estimate_best_constant(rep);

  try {
    rep.sequence = discretizing_sequence(triple.w, opts.k_min, opts.k_cap, opts.tol);
    if (rep.sequence->window_shifted) rep.notes.push_back("discretization window shifted below K_min to reach M - 1");
    if (rep.sequence->cells() >= 1) {
      rep.discrete = compute_discrete_constants(triple, params, *rep.sequence, opts, false);
      rep.discrete_estimate = discrete_estimate(rep);
    }
  } catch (const NumericalError& e) {
    rep.notes.push_back(std::string("discrete constants unavailable: ") + e.what());
  }

  bool infinite = false, shaky = false;
  for (int i : regime_pair(rep.regime)) {
    const auto& c = *rep.C[std::size_t(i - 1)];
    if (c.value.is_infinite()) infinite = true;
    if (!c.reliable()) shaky = true;
  }
  if (shaky) rep.holds = Verdict::Inconclusive;
  else rep.holds = infinite ? Verdict::Infinite : Verdict::Finite;
  return rep;
}

}  // namespace chcert
