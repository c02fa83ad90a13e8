// SPDX-License-Identifier: Apache-2.0
#include "chcert/weights.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "chcert/errors.hpp"
#include "chcert/quadrature.hpp"

namespace chcert {

std::string ExtendedReal::to_string() const {
  if (is_infinite()) return "inf";
  std::ostringstream os;
  os.precision(17);
  os << v_;
  return os.str();
}

std::string to_string(AtomKind kind) {
  switch (kind) {
    case AtomKind::Constant: return "constant";
    case AtomKind::Power: return "power";
    case AtomKind::PowerLog: return "power_log";
    case AtomKind::Exponential: return "exponential";
  }
  return "unknown";
}

namespace {

std::string num(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

// Limit of d^alpha |log d|^beta as d -> d0 in {0, 1, inf} or at a regular d0.
double power_log_value(double d, double alpha, double beta) {
  if (d == 0.0 || std::isinf(d)) {
    const double sgn = d == 0.0 ? -alpha : alpha;  // sign of the log-exponent of d^alpha
    if (sgn > 0.0) return kInf;
    if (sgn < 0.0) return 0.0;
    if (beta > 0.0) return kInf;
    if (beta < 0.0) return 0.0;
    return 1.0;
  }
  const double l = std::fabs(std::log(d));
  if (l == 0.0) {
    if (beta > 0.0) return 0.0;
    if (beta < 0.0) return kInf;
    return std::pow(d, alpha);
  }
  return std::pow(d, alpha) * std::pow(l, beta);
}

// \int_{d1}^{d2} c s^alpha ds for 0 <= d1 < d2 <= inf.
double power_primitive(double c, double alpha, double d1, double d2) {
  if (!(d1 < d2)) return 0.0;
  const double e = alpha + 1.0;
  if (e == 0.0) {
    if (d1 == 0.0 || std::isinf(d2)) return kInf;
    return c * std::log1p((d2 - d1) / d1);
  }
  if (e > 0.0) {
    if (std::isinf(d2)) return kInf;
    if (d1 == 0.0) return c * std::pow(d2, e) / e;
    // d2^e - d1^e written to avoid cancellation when d1 ~ d2.
    return c * std::pow(d1, e) * std::expm1(e * std::log1p((d2 - d1) / d1)) / e;
  }
  if (d1 == 0.0) return kInf;
  if (std::isinf(d2)) return c * std::pow(d1, e) / (-e);
  return c * std::pow(d1, e) * (-std::expm1(e * std::log1p((d2 - d1) / d1))) / (-e);
}

double exp_primitive(double c, double gamma, double lo, double hi) {
  if (gamma == 0.0) return c * (hi - lo);
  if (gamma > 0.0) {
    if (std::isinf(hi)) return kInf;
    return c / gamma * std::exp(gamma * hi) * (-std::expm1(-gamma * (hi - lo)));
  }
  if (std::isinf(lo)) return kInf;
  return c / -gamma * std::exp(gamma * lo) * (-std::expm1(gamma * (hi - lo)));
}

// Distances from the centre of a power-type atom for a piece-local segment.
void distances(const Atom& at, double lo, double hi, double& d1, double& d2) {
  if (at.center <= lo) {
    d1 = lo - at.center;
    d2 = hi - at.center;
  } else {
    d1 = at.center - hi;
    d2 = at.center - lo;
  }
}

double atom_integral(const Atom& at, double lo, double hi) {
  switch (at.kind) {
    case AtomKind::Constant:
      if (std::isinf(lo) || std::isinf(hi)) return kInf;
      return at.c * (hi - lo);
    case AtomKind::Power: {
      double d1, d2;
      distances(at, lo, hi, d1, d2);
      return power_primitive(at.c, at.alpha, d1, d2);
    }
    case AtomKind::Exponential:
      return exp_primitive(at.c, at.gamma, lo, hi);
    case AtomKind::PowerLog: {
      double d1, d2;
      distances(at, lo, hi, d1, d2);
      const double alpha = at.alpha, beta = at.beta;
      auto g = [alpha, beta](double s) { return power_log_value(s, alpha, beta); };
      QuadratureOptions o;
      o.tol = 1e-12;
      if (d1 < 1.0 && 1.0 < d2) o.breakpoints = {1.0};
      auto r = integrate(g, Interval(d1, d2), o);
      return ext::mul(at.c, r.value.value());
    }
  }
  return 0.0;
}

double atom_sup(const Atom& at, double lo, double hi) {
  double s = std::max(at.limit(lo), at.limit(hi));
  if (at.kind == AtomKind::PowerLog && at.alpha != 0.0) {
    const double dstar = std::exp(-at.beta / at.alpha);
    double d1, d2;
    distances(at, lo, hi, d1, d2);
    if (d1 < dstar && dstar < d2) s = std::max(s, at.c * power_log_value(dstar, at.alpha, at.beta));
  }
  return s;
}

void validate_piece(const Piece& p) {
  const Atom& at = p.atom;
  auto bad = [&](const std::string& why) {
    throw DomainError("weight piece (" + num(p.lo) + ", " + num(p.hi) + "): " + why);
  };
  if (!(p.lo < p.hi)) bad("empty piece");
  if (!(at.c > 0.0) || std::isinf(at.c)) bad("coefficient must be positive and finite");
  for (double x : {at.alpha, at.beta, at.gamma, at.center})
    if (!std::isfinite(x)) bad("parameters must be finite");
  auto inside = [&](double x) { return p.lo < x && x < p.hi; };
  if (at.kind == AtomKind::Power || at.kind == AtomKind::PowerLog)
    if (inside(at.center)) bad("singular centre inside the piece");
  if (at.kind == AtomKind::PowerLog && at.beta != 0.0)
    if (inside(at.center - 1.0) || inside(at.center + 1.0)) bad("log factor vanishes inside the piece");
}

}  // namespace

double Atom::operator()(double t) const {
  switch (kind) {
    case AtomKind::Constant: return c;
    case AtomKind::Power: return c * std::pow(std::fabs(t - center), alpha);
    case AtomKind::PowerLog: return c * power_log_value(std::fabs(t - center), alpha, beta);
    case AtomKind::Exponential: return c * std::exp(gamma * t);
  }
  return 0.0;
}

double Atom::limit(double t) const {
  switch (kind) {
    case AtomKind::Constant: return c;
    case AtomKind::Power: {
      const double d = std::fabs(t - center);
      if (d == 0.0) return alpha > 0.0 ? 0.0 : (alpha < 0.0 ? kInf : c);
      if (std::isinf(d)) return alpha > 0.0 ? kInf : (alpha < 0.0 ? 0.0 : c);
      return c * std::pow(d, alpha);
    }
    case AtomKind::PowerLog: return ext::mul(c, power_log_value(std::fabs(t - center), alpha, beta));
    case AtomKind::Exponential: return c * std::exp(gamma * t);
  }
  return 0.0;
}

Atom Atom::pow(double kappa) const {
  Atom r = *this;
  r.c = std::pow(c, kappa);
  r.alpha = alpha * kappa;
  r.beta = beta * kappa;
  r.gamma = gamma * kappa;
  return r;
}

Atom Atom::reflected() const {
  Atom r = *this;
  r.center = -center;
  r.gamma = -gamma;
  return r;
}

WeightExpr::WeightExpr(Interval domain, std::vector<Piece> pieces) : domain_(domain), pieces_(std::move(pieces)) {
  if (pieces_.empty()) throw DomainError("weight: no pieces");
  if (pieces_.front().lo != domain_.a() || pieces_.back().hi != domain_.b())
    throw DomainError("weight: pieces must cover the domain");
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    validate_piece(pieces_[i]);
    if (i > 0 && pieces_[i].lo != pieces_[i - 1].hi) throw DomainError("weight: pieces must be contiguous");
  }
}

WeightExpr WeightExpr::constant(Interval d, double c) {
  return WeightExpr(d, {{d.a(), d.b(), Atom{AtomKind::Constant, c}}});
}

WeightExpr WeightExpr::power(Interval d, double c, double alpha, double center) {
  Atom at{AtomKind::Power, c, alpha, 0.0, 0.0, center};
  return WeightExpr(d, {{d.a(), d.b(), at}});
}

WeightExpr WeightExpr::power_log(Interval d, double c, double alpha, double beta, double center) {
  Atom at{AtomKind::PowerLog, c, alpha, beta, 0.0, center};
  return WeightExpr(d, {{d.a(), d.b(), at}});
}

WeightExpr WeightExpr::exponential(Interval d, double c, double gamma) {
  Atom at{AtomKind::Exponential, c, 0.0, 0.0, gamma, 0.0};
  return WeightExpr(d, {{d.a(), d.b(), at}});
}

WeightExpr WeightExpr::tabulated(Interval d, const std::vector<double>& breaks, const std::vector<double>& values) {
  if (values.size() != breaks.size() + 1) throw DomainError("tabulated weight: need one more value than breaks");
  std::vector<Piece> ps;
  double lo = d.a();
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double hi = i < breaks.size() ? breaks[i] : d.b();
    if (i < breaks.size() && !d.contains(hi)) throw DomainError("tabulated weight: break outside the domain");
    ps.push_back({lo, hi, Atom{AtomKind::Constant, values[i]}});
    lo = hi;
  }
  return WeightExpr(d, std::move(ps));
}

std::vector<double> WeightExpr::breakpoints() const {
  std::vector<double> out;
  for (std::size_t i = 1; i < pieces_.size(); ++i) out.push_back(pieces_[i].lo);
  return out;
}

double WeightExpr::eval(double t) const {
  if (!domain_.contains(t)) throw DomainError("weight evaluated outside its domain at t=" + num(t));
  auto it = std::upper_bound(pieces_.begin(), pieces_.end(), t, [](double x, const Piece& p) { return x < p.hi; });
  if (it == pieces_.end()) --it;
  return it->atom(t);
}

ExtendedReal WeightExpr::integral(double lo, double hi) const {
  if (!domain_.contains_closure(lo) || !domain_.contains_closure(hi) || std::isnan(lo) || std::isnan(hi))
    throw DomainError("weight integral: limits outside the domain");
  if (!(lo < hi)) return 0.0;
  double total = 0.0;
  for (const auto& p : pieces_) {
    const double l = std::max(lo, p.lo), h = std::min(hi, p.hi);
    if (!(l < h)) continue;
    total += atom_integral(p.atom, l, h);
    if (std::isinf(total)) return ExtendedReal::infinity();
  }
  return total;
}

ExtendedReal WeightExpr::sup_on(double lo, double hi) const {
  if (!domain_.contains_closure(lo) || !domain_.contains_closure(hi) || !(lo < hi))
    throw DomainError("weight sup: bad subinterval");
  double s = 0.0;
  for (const auto& p : pieces_) {
    const double l = std::max(lo, p.lo), h = std::min(hi, p.hi);
    if (!(l < h)) continue;
    s = std::max(s, atom_sup(p.atom, l, h));
  }
  return s;
}

WeightExpr WeightExpr::pow(double kappa) const {
  if (kappa == 0.0 || !std::isfinite(kappa)) throw DomainError("weight pow: exponent must be nonzero and finite");
  auto ps = pieces_;
  for (auto& p : ps) {
    p.atom = p.atom.pow(kappa);
    if (!(p.atom.c > 0.0) || std::isinf(p.atom.c))
      throw DomainError("weight pow: coefficient over- or underflows");
  }
  return WeightExpr(domain_, std::move(ps));
}

WeightExpr WeightExpr::scaled(double lambda) const {
  if (!(lambda > 0.0) || std::isinf(lambda)) throw DomainError("weight scale: factor must be positive and finite");
  auto ps = pieces_;
  for (auto& p : ps) p.atom.c *= lambda;
  return WeightExpr(domain_, std::move(ps));
}

WeightExpr WeightExpr::reflected() const {
  std::vector<Piece> ps;
  for (auto it = pieces_.rbegin(); it != pieces_.rend(); ++it) ps.push_back({-it->hi, -it->lo, it->atom.reflected()});
  return WeightExpr(Interval(-domain_.b(), -domain_.a()), std::move(ps));
}

ExtendedReal primitive_W(const WeightExpr& w, double t) { return w.integral(w.domain().a(), t); }

ExtendedReal tail_U(const WeightExpr& u, double t) { return u.integral(t, u.domain().b()); }

VpEvaluator::VpEvaluator(const WeightExpr& v, double p) : p_(p), v_(v) {
  if (!(p > 0.0 && p <= 1.0)) throw DomainError("V_p: require 0 < p <= 1");
  if (p < 1.0) powered_ = v.pow(1.0 / (1.0 - p));
}

double VpEvaluator::mass(double x, double t) const {
  if (!powered_) throw InvalidRequestError("V_p mass is defined only for p < 1");
  return powered_->integral(x, t).value();
}

double VpEvaluator::operator()(double x, double t) const {
  if (!(x < t)) return 0.0;
  if (!powered_) return v_.sup_on(x, t).value();
  return ext::pow(mass(x, t), (1.0 - p_) / p_);
}

ExtendedReal compute_Vp(const WeightExpr& v, double p, Interval sub) {
  if (!v.domain().contains_closure(sub.a()) || !v.domain().contains_closure(sub.b()))
    throw DomainError("V_p: subinterval outside the weight's domain");
  return VpEvaluator(v, p)(sub.a(), sub.b());
}

WeightTriple::WeightTriple(WeightExpr u_, WeightExpr v_, WeightExpr w_)
    : u(std::move(u_)), v(std::move(v_)), w(std::move(w_)) {
  if (!(u.domain() == v.domain() && v.domain() == w.domain()))
    throw DomainError("weights u, v, w must share one interval");
}

std::vector<double> WeightTriple::breakpoints() const {
  std::vector<double> out;
  for (const auto* x : {&u, &v, &w})
    for (double t : x->breakpoints()) out.push_back(t);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace chcert
