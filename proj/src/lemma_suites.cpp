// SPDX-License-Identifier: Apache-2.0
#include "chcert/lemma_suites.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <sstream>

#include "chcert/discrete_lemmas.hpp"
#include "chcert/discretize.hpp"
#include "chcert/errors.hpp"
#include "chcert/weights.hpp"

namespace chcert {
namespace {

std::uint64_t mix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

double rel(double x, double y) {
  if (x == y) return 0.0;
  return std::fabs(x - y) / std::max(std::fabs(x), std::fabs(y));
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng_); }
  double logu(double lo, double hi) { return std::exp(uniform(lo, hi)); }
  std::size_t index(std::size_t n) { return std::size_t(eng_() % n); }
  bool coin(double p = 0.5) { return uniform(0.0, 1.0) < p; }

 private:
  std::mt19937_64 eng_;
};

struct Recorder {
  SuiteResult res;
  std::map<std::string, SuiteBucket> buckets;
  std::vector<std::string> order;

  void ratio(const std::string& label, const EquivalenceCheck& c) {
    auto it = buckets.find(label);
    if (it == buckets.end()) {
      order.push_back(label);
      SuiteBucket b;
      b.label = label;
      b.min_ratio = kInf;
      b.max_ratio = 0.0;
      b.bracket_lower = kInf;
      b.bracket_upper = 0.0;
      b.min_lower_use = kInf;
      it = buckets.emplace(label, b).first;
    }
    auto& b = it->second;
    ++b.cases;
    b.min_ratio = std::min(b.min_ratio, c.ratio);
    b.max_ratio = std::max(b.max_ratio, c.ratio);
    b.bracket_lower = std::min(b.bracket_lower, c.bracket.lower);
    b.bracket_upper = std::max(b.bracket_upper, c.bracket.upper);
    b.max_upper_use = std::max(b.max_upper_use, c.ratio / c.bracket.upper);
    b.min_lower_use = std::min(b.min_lower_use, c.ratio / c.bracket.lower);
  }

  void fail(const std::string& what) {
    ++res.failures;
    if (res.failure_examples.size() < 5) res.failure_examples.push_back(what);
  }

  SuiteResult finish() {
    for (const auto& l : order) res.buckets.push_back(buckets.at(l));
    return std::move(res);
  }
};

std::vector<double> positive_seq(Rng& g, std::size_t n, double zero_prob = 0.0) {
  std::vector<double> x(n);
  for (auto& v : x) v = g.coin(zero_prob) ? 0.0 : g.logu(-5.0, 5.0);
  return x;
}

std::vector<double> nondecreasing_seq(Rng& g, std::size_t n) {
  std::vector<double> b(n);
  double acc = g.logu(-5.0, 5.0);
  for (auto& v : b) {
    v = acc;
    if (!g.coin(0.2)) acc += g.logu(-5.0, 5.0);
  }
  return b;
}

// inf rho_{k+1}/rho_k >= 2.
std::vector<double> strongly_increasing(Rng& g, std::size_t n) {
  std::vector<double> rho(n);
  double r = g.logu(-3.0, 3.0);
  for (auto& v : rho) {
    v = r;
    r *= 2.0 + g.logu(-4.0, 1.5);
  }
  return rho;
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

SuiteResult suite_abel(std::size_t cases, Rng& g) {
  Recorder rec;
  for (std::size_t i = 0; i < cases; ++i) {
    const std::size_t n = 1 + g.index(50);
    const auto c = positive_seq(g, n, 0.1);
    const auto b = nondecreasing_seq(g, n);
    const auto chk = abel_identity_check(c, b);
    rec.res.max_rel_diff = std::max(rec.res.max_rel_diff, chk.rel_diff);
    if (!(chk.rel_diff <= 1e-12)) rec.fail("case " + std::to_string(i) + ": rel diff " + fmt(chk.rel_diff));
  }
  return rec.finish();
}

SuiteResult suite_sup_sup(std::size_t cases, Rng& g) {
  Recorder rec;
  for (std::size_t i = 0; i < cases; ++i) {
    const std::size_t n = 1 + g.index(50);
    const auto rho = nondecreasing_seq(g, n);
    const auto a = positive_seq(g, n, 0.1);
    const double beta = (i % 3 == 0) ? 0.5 : (i % 3 == 1) ? 1.0 : 2.0;
    const auto chk = tail_comparison_check(TailVariant::SupSup, rho, a, beta);
    const double d = rel(chk.lhs, chk.rhs);
    rec.res.max_rel_diff = std::max(rec.res.max_rel_diff, d);
    if (!(d <= 1e-12)) rec.fail("case " + std::to_string(i) + ": lhs " + fmt(chk.lhs) + " rhs " + fmt(chk.rhs));
  }
  return rec.finish();
}

SuiteResult suite_tail_power(std::size_t cases, Rng& g) {
  Recorder rec;
  const double ss[3] = {0.5, 1.0, 2.0};
  for (std::size_t i = 0; i < cases; ++i) {
    const double s = ss[i % 3];
    const std::size_t n = 1 + g.index(50);
    PositiveSequence a{0, positive_seq(g, n, 0.1), false};
    PositiveSequence b{0, nondecreasing_seq(g, n), false};
    const auto chk = tail_power_equivalence(a, b, s);
    rec.ratio("s=" + fmt(s), chk);
    if (!chk.in_bracket)
      rec.fail("case " + std::to_string(i) + " s=" + fmt(s) + ": ratio " + fmt(chk.ratio) + " outside [" +
               fmt(chk.bracket.lower) + ", " + fmt(chk.bracket.upper) + "]");
  }
  return rec.finish();
}

SuiteResult suite_tail_comparison(TailVariant v, std::size_t cases, Rng& g) {
  Recorder rec;
  const double bs[3] = {0.5, 1.0, 2.0};
  for (std::size_t i = 0; i < cases; ++i) {
    const double beta = bs[i % 3];
    const std::size_t n = 1 + g.index(50);
    const auto rho = strongly_increasing(g, n);
    const auto a = positive_seq(g, n, 0.1);
    const auto chk = tail_comparison_check(v, rho, a, beta);
    rec.ratio("beta=" + fmt(beta), chk);
    // The direction with constant 1 (a_k <= tail sums / tail sups) holds exactly in floating point.
    if (chk.lhs < chk.rhs)
      rec.fail("case " + std::to_string(i) + " beta=" + fmt(beta) + ": lhs " + fmt(chk.lhs) + " < rhs " +
               fmt(chk.rhs));
    else if (!chk.in_bracket)
      rec.fail("case " + std::to_string(i) + " beta=" + fmt(beta) + ": ratio " + fmt(chk.ratio) + " above " +
               fmt(chk.bracket.upper));
  }
  return rec.finish();
}

// Random piecewise power weight on (0, L) with the singular point at 0.
WeightExpr random_power_weight(Rng& g, Interval dom, double alpha_lo, double alpha_hi) {
  const std::size_t pieces = 1 + g.index(4);
  std::vector<double> cuts{dom.a()};
  const double hi = dom.right_finite() ? dom.b() : dom.a() + 8.0;
  std::vector<double> inner;
  for (std::size_t i = 1; i < pieces; ++i) inner.push_back(g.uniform(dom.a(), hi));
  std::sort(inner.begin(), inner.end());
  inner.erase(std::unique(inner.begin(), inner.end()), inner.end());
  for (double t : inner)
    if (t > cuts.back()) cuts.push_back(t);
  cuts.push_back(dom.b());
  std::vector<Piece> ps;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    Atom at;
    at.kind = AtomKind::Power;
    at.c = g.logu(-2.0, 2.0);
    at.alpha = g.uniform(alpha_lo, alpha_hi);
    at.center = dom.a();
    ps.push_back({cuts[i], cuts[i + 1], at});
  }
  return WeightExpr(dom, ps);
}

SuiteResult suite_vp_split(std::size_t cases, Rng& g) {
  Recorder rec;
  const double ps[3] = {0.3, 0.5, 1.0};
  for (std::size_t i = 0; i < cases; ++i) {
    const double p = ps[i % 3];
    const Interval dom(0.0, g.logu(-1.0, 2.0));
    const auto v = random_power_weight(g, dom, -0.5, 3.0);
    double x, y, z;
    do {
      x = g.coin(0.25) ? dom.a() : g.uniform(dom.a(), dom.b());
      z = g.uniform(dom.a(), dom.b());
      if (x > z) std::swap(x, z);
      y = g.uniform(x, z);
    } while (!(x < y && y < z));
    const double whole = compute_Vp(v, p, {x, z}).value();
    const double left = compute_Vp(v, p, {x, y}).value();
    const double right = compute_Vp(v, p, {y, z}).value();
    double lhs, rhs;
    if (p == 1.0) {
      lhs = whole;
      rhs = std::max(left, right);
    } else {
      const double e = p / (1.0 - p);
      lhs = ext::pow(whole, e);
      rhs = ext::pow(left, e) + ext::pow(right, e);
    }
    const double d = rel(lhs, rhs);
    rec.res.max_rel_diff = std::max(rec.res.max_rel_diff, d);
    if (!(d <= 1e-10)) rec.fail("case " + std::to_string(i) + " p=" + fmt(p) + ": rel diff " + fmt(d));
  }
  return rec.finish();
}

SuiteResult suite_int_equiv(std::size_t cases, Rng& g) {
  Recorder rec;
  const double as[3] = {0.0, 1.0, 3.0};
  for (std::size_t i = 0; i < cases; ++i) {
    const double alpha = as[i % 3];
    const bool unbounded = g.coin(0.3);
    const Interval dom(0.0, unbounded ? kInf : g.logu(-1.0, 2.0));
    const WeightExpr w = unbounded ? WeightExpr::power(dom, g.logu(-1.0, 1.0), g.uniform(-0.5, 1.0), 0.0)
                                   : random_power_weight(g, dom, -0.8, 2.0);
    const auto seq = discretizing_sequence(w, -30, 30, 1e-12);
    // Nonincreasing staircase, zero beyond its last step.
    const double span = dom.right_finite() ? dom.b() : seq.x.back();
    const std::size_t steps = 1 + g.index(6);
    std::vector<double> br;
    for (std::size_t j = 0; j < steps; ++j) br.push_back(g.uniform(dom.a(), span));
    std::sort(br.begin(), br.end());
    br.erase(std::unique(br.begin(), br.end()), br.end());
    br.erase(std::remove_if(br.begin(), br.end(), [&](double t) { return !dom.contains(t); }), br.end());
    std::vector<double> val(br.size() + 1);
    double cur = g.logu(-2.0, 2.0);
    for (auto& y : val) {
      y = cur;
      cur *= g.uniform(0.0, 1.0);
    }
    if (g.coin(0.5)) val.back() = 0.0;
    auto h = [br, val](double t) {
      const auto it = std::upper_bound(br.begin(), br.end(), t);
      return val[std::size_t(it - br.begin())];
    };
    const auto rep = verify_int_equiv(w, seq, alpha, h, 1e-10, br);
    EquivalenceCheck c;
    c.ratio = rep.ratio;
    c.bracket = {rep.lower, rep.upper};
    rec.ratio("alpha=" + fmt(alpha), c);
    if (!rep.in_bracket)
      rec.fail("case " + std::to_string(i) + " alpha=" + fmt(alpha) + ": ratio " + fmt(rep.ratio) + " outside [" +
               fmt(rep.lower) + ", " + fmt(rep.upper) + "]");
  }
  return rec.finish();
}

}  // namespace

const std::vector<std::string>& lemma_suite_names() {
  static const std::vector<std::string> names{"abel",    "sup-sup", "tail-power", "sum-sum",
                                              "sum-sup", "sup-sum", "int-equiv",  "vp-split"};
  return names;
}

SuiteResult run_lemma_suite(const std::string& name, std::size_t cases, std::uint64_t seed) {
  const auto& names = lemma_suite_names();
  const auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw DomainError("unknown lemma suite '" + name + "'");
  Rng g(mix(seed ^ mix(0x51u + std::uint64_t(it - names.begin()))));
  SuiteResult res;
  if (name == "abel") res = suite_abel(cases, g);
  else if (name == "sup-sup") res = suite_sup_sup(cases, g);
  else if (name == "tail-power") res = suite_tail_power(cases, g);
  else if (name == "sum-sum") res = suite_tail_comparison(TailVariant::SumSum, cases, g);
  else if (name == "sum-sup") res = suite_tail_comparison(TailVariant::SumSup, cases, g);
  else if (name == "sup-sum") res = suite_tail_comparison(TailVariant::SupSum, cases, g);
  else if (name == "int-equiv") res = suite_int_equiv(cases, g);
  else res = suite_vp_split(cases, g);
  res.name = name;
  res.cases = cases;
  return res;
}

}  // namespace chcert
