// SPDX-License-Identifier: Apache-2.0
#include "chcert/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "chcert/errors.hpp"

namespace chcert {

namespace pt = boost::property_tree;

std::string format_double(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) { throw ConfigError(path + ": " + msg); }

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& path, const std::string& text) {
  const std::string t = trim(text);
  double x = 0.0;
  const char* first = t.data();
  if (!t.empty() && t[0] == '+') ++first;
  auto res = std::from_chars(first, t.data() + t.size(), x);
  if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size() || std::isnan(x))
    fail(path, "expected a number, got '" + t + "'");
  return x;
}

long long parse_int(const std::string& path, const std::string& text) {
  const std::string t = trim(text);
  long long x = 0;
  auto res = std::from_chars(t.data(), t.data() + t.size(), x);
  if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size())
    fail(path, "expected an integer, got '" + t + "'");
  return x;
}

std::size_t parse_count(const std::string& path, const std::string& text) {
  const long long x = parse_int(path, text);
  if (x < 0) fail(path, "must be nonnegative");
  return std::size_t(x);
}

bool parse_bool(const std::string& path, const std::string& text) {
  const std::string t = trim(text);
  if (t == "true" || t == "1" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "no") return false;
  fail(path, "expected true or false, got '" + t + "'");
}

std::vector<std::string> split(const std::string& text, const std::string& seps) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : text) {
    if (seps.find(ch) != std::string::npos) {
      if (!trim(cur).empty()) out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!trim(cur).empty()) out.push_back(trim(cur));
  return out;
}

std::vector<double> parse_list(const std::string& path, const std::string& text) {
  std::vector<double> out;
  for (const auto& tok : split(text, ", \t")) out.push_back(parse_double(path, tok));
  return out;
}

std::string join(const std::vector<double>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? ", " : "") + format_double(xs[i]);
  return s;
}

AtomKind atom_kind(const std::string& path, const std::string& s) {
  if (s == "constant") return AtomKind::Constant;
  if (s == "power") return AtomKind::Power;
  if (s == "power_log") return AtomKind::PowerLog;
  if (s == "exponential") return AtomKind::Exponential;
  fail(path, "unknown atom kind '" + s + "'");
}

std::vector<Piece> parse_pieces(const std::string& path, const std::string& text) {
  std::vector<Piece> out;
  for (const auto& entry : split(text, ";")) {
    const auto f = split(entry, " \t");
    if (f.size() != 8) fail(path, "each piece needs 'lo hi kind c alpha beta gamma center', got '" + entry + "'");
    Piece pc{parse_double(path, f[0]), parse_double(path, f[1]), {}};
    pc.atom.kind = atom_kind(path, f[2]);
    pc.atom.c = parse_double(path, f[3]);
    pc.atom.alpha = parse_double(path, f[4]);
    pc.atom.beta = parse_double(path, f[5]);
    pc.atom.gamma = parse_double(path, f[6]);
    pc.atom.center = parse_double(path, f[7]);
    out.push_back(pc);
  }
  if (out.empty()) fail(path, "no pieces given");
  return out;
}

std::string format_pieces(const std::vector<Piece>& ps) {
  std::string s;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const auto& p = ps[i];
    s += (i ? "; " : "") + format_double(p.lo) + " " + format_double(p.hi) + " " + to_string(p.atom.kind) + " " +
         format_double(p.atom.c) + " " + format_double(p.atom.alpha) + " " + format_double(p.atom.beta) + " " +
         format_double(p.atom.gamma) + " " + format_double(p.atom.center);
  }
  return s;
}

const std::set<std::string> kAtomKinds{"constant", "power", "power_log", "exponential"};

bool uses_key(const std::string& kind, const std::string& key) {
  const auto& ks = weight_keys(kind);
  return std::find(ks.begin(), ks.end(), key) != ks.end();
}

// Drops inline comments: a ';' or '#' preceded by whitespace ends the line.
std::string strip_inline_comments(const std::string& text) {
  std::istringstream in(text);
  std::string line, out;
  while (std::getline(in, line)) {
    for (std::size_t i = 1; i < line.size(); ++i)
      if ((line[i] == ';' || line[i] == '#') && (line[i - 1] == ' ' || line[i - 1] == '\t')) {
        line.resize(i);
        break;
      }
    out += line;
    out += '\n';
  }
  return out;
}

WeightSpec parse_weight(const std::string& path, const pt::ptree& sec) {
  WeightSpec ws;
  const auto kind = sec.get_optional<std::string>("kind");
  if (!kind) fail(path + ".kind", "missing");
  ws.kind = trim(*kind);
  if (!kAtomKinds.count(ws.kind) && ws.kind != "tabulated" && ws.kind != "pieces")
    fail(path + ".kind", "unknown weight kind '" + ws.kind + "'");
  for (const auto& [key, val] : sec) {
    const std::string fp = path + "." + key;
    const std::string v = val.data();
    if (key == "kind") continue;
    if (!uses_key(ws.kind, key)) fail(fp, "not used by kind " + ws.kind);
    if (key == "c") ws.c = parse_double(fp, v);
    else if (key == "alpha") ws.alpha = parse_double(fp, v);
    else if (key == "beta") ws.beta = parse_double(fp, v);
    else if (key == "gamma") ws.gamma = parse_double(fp, v);
    else if (key == "center") ws.center = parse_double(fp, v);
    else if (key == "breaks") ws.breaks = parse_list(fp, v);
    else if (key == "values") ws.values = parse_list(fp, v);
    else if (key == "pieces") ws.pieces = parse_pieces(fp, v);
  }
  if (ws.kind == "tabulated" && ws.values.size() != ws.breaks.size() + 1)
    fail(path + ".values", "tabulated weights need one more value than breaks");
  if (ws.kind == "pieces" && ws.pieces.empty()) fail(path + ".pieces", "missing");
  return ws;
}

void write_weight(std::ostream& os, const std::string& name, const WeightSpec& ws) {
  os << "[weights." << name << "]\n";
  os << "kind = " << ws.kind << "\n";
  if (ws.kind == "tabulated") {
    os << "breaks = " << join(ws.breaks) << "\n";
    os << "values = " << join(ws.values) << "\n";
  } else if (ws.kind == "pieces") {
    os << "pieces = " << format_pieces(ws.pieces) << "\n";
  } else {
    const std::map<std::string, double> field{
        {"c", ws.c}, {"alpha", ws.alpha}, {"beta", ws.beta}, {"gamma", ws.gamma}, {"center", ws.center}};
    for (const auto& key : weight_keys(ws.kind)) os << key << " = " << format_double(field.at(key)) << "\n";
  }
  os << "\n";
}

using Handler = std::function<void(const std::string& path, const std::string& value)>;

void read_section(const std::string& name, const pt::ptree& sec, const std::map<std::string, Handler>& keys) {
  for (const auto& [key, val] : sec) {
    const std::string path = name + "." + key;
    const auto it = keys.find(key);
    if (it == keys.end()) fail(path, "unknown key");
    it->second(path, val.data());
  }
}

}  // namespace

const std::vector<std::string>& weight_keys(const std::string& kind) {
  static const std::map<std::string, std::vector<std::string>> keys{
      {"constant", {"c"}},
      {"power", {"c", "alpha", "center"}},
      {"power_log", {"c", "alpha", "beta", "center"}},
      {"exponential", {"c", "gamma"}},
      {"tabulated", {"breaks", "values"}},
      {"pieces", {"pieces"}},
  };
  static const std::vector<std::string> none;
  const auto it = keys.find(kind);
  return it == keys.end() ? none : it->second;
}

WeightExpr WeightSpec::build(Interval domain) const {
  if (kind == "constant") return WeightExpr::constant(domain, c);
  if (kind == "power") return WeightExpr::power(domain, c, alpha, center);
  if (kind == "power_log") return WeightExpr::power_log(domain, c, alpha, beta, center);
  if (kind == "exponential") return WeightExpr::exponential(domain, c, gamma);
  if (kind == "tabulated") return WeightExpr::tabulated(domain, breaks, values);
  if (kind == "pieces") return WeightExpr(domain, pieces);
  throw ConfigError("unknown weight kind '" + kind + "'");
}

void WeightSpec::set(const std::string& field, double value) {
  if (!uses_key(kind, field) || kind == "tabulated" || kind == "pieces")
    throw ConfigError(field + ": not a parameter of kind " + kind);
  if (field == "c") c = value;
  else if (field == "alpha") alpha = value;
  else if (field == "beta") beta = value;
  else if (field == "gamma") gamma = value;
  else if (field == "center") center = value;
  else throw ConfigError(field + ": not a weight parameter (c, alpha, beta, gamma, center)");
}

ProblemInstance RunConfig::instance() const {
  Interval dom = [&] {
    try {
      return Interval(a, b);
    } catch (const DomainError& e) {
      throw ConfigError(std::string("interval: ") + e.what());
    }
  }();
  auto build = [&](const char* name, const WeightSpec& ws) {
    try {
      return ws.build(dom);
    } catch (const ConfigError&) {
      throw;
    } catch (const DomainError& e) {
      throw ConfigError(std::string("weights.") + name + ": " + e.what());
    }
  };
  ProblemInstance inst(form, params, WeightTriple(build("u", u), build("v", v), build("w", w)));
  try {
    inst.validate();
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  return inst;
}

ConditionOptions RunConfig::condition_options() const {
  ConditionOptions o;
  o.tol = tol;
  o.nodes = nodes;
  o.cell_nodes = cell_nodes;
  o.k_min = k_min;
  o.k_cap = k_cap;
  return o;
}

OracleOptions RunConfig::oracle_options() const {
  OracleOptions o;
  o.restarts = budget;
  o.steps = steps;
  o.seed = seed;
  o.tol = tol;
  o.k_min = k_min;
  o.k_cap = k_cap;
  o.min_width = min_width;
  return o;
}

RunConfig parse_config(const std::string& text) {
  pt::ptree tree;
  try {
    std::istringstream is(strip_inline_comments(text));
    pt::read_ini(is, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("config: line " + std::to_string(e.line()) + ": " + e.message());
  }
  RunConfig cfg;
  bool have[3] = {false, false, false};
  for (const auto& [name, sec] : tree) {
    if (sec.empty() && !sec.data().empty()) fail(name, "top-level keys must sit inside a section");
    if (name == "instance") {
      read_section(name, sec, {{"form", [&](auto& p, auto& v) {
                                  try {
                                    cfg.form = form_from_string(trim(v));
                                  } catch (const DomainError& e) {
                                    fail(p, e.what());
                                  }
                                }}});
    } else if (name == "interval") {
      read_section(name, sec, {{"a", [&](auto& p, auto& v) { cfg.a = parse_double(p, v); }},
                               {"b", [&](auto& p, auto& v) { cfg.b = parse_double(p, v); }}});
    } else if (name == "parameters") {
      read_section(name, sec, {{"p", [&](auto& p, auto& v) { cfg.params.p = parse_double(p, v); }},
                               {"q", [&](auto& p, auto& v) { cfg.params.q = parse_double(p, v); }},
                               {"r", [&](auto& p, auto& v) { cfg.params.r = parse_double(p, v); }}});
    } else if (name == "weights.u" || name == "weights.v" || name == "weights.w") {
      const char which = name.back();
      auto ws = parse_weight(name, sec);
      if (which == 'u') cfg.u = ws, have[0] = true;
      if (which == 'v') cfg.v = ws, have[1] = true;
      if (which == 'w') cfg.w = ws, have[2] = true;
    } else if (name == "tolerances") {
      read_section(name, sec,
                   {{"tol", [&](auto& p, auto& v) { cfg.tol = parse_double(p, v); }},
                    {"nodes", [&](auto& p, auto& v) { cfg.nodes = parse_count(p, v); }},
                    {"cell_nodes", [&](auto& p, auto& v) { cfg.cell_nodes = parse_count(p, v); }}});
    } else if (name == "discretize") {
      read_section(name, sec, {{"k_min", [&](auto& p, auto& v) { cfg.k_min = int(parse_int(p, v)); }},
                               {"k_cap", [&](auto& p, auto& v) { cfg.k_cap = int(parse_int(p, v)); }}});
    } else if (name == "oracle") {
      read_section(name, sec,
                   {{"budget", [&](auto& p, auto& v) { cfg.budget = parse_count(p, v); }},
                    {"steps", [&](auto& p, auto& v) { cfg.steps = parse_count(p, v); }},
                    {"seed", [&](auto& p, auto& v) { cfg.seed = std::uint64_t(parse_count(p, v)); }},
                    {"min_width", [&](auto& p, auto& v) { cfg.min_width = parse_double(p, v); }}});
    } else if (name == "output") {
      read_section(name, sec, {{"path", [&](auto&, auto& v) { cfg.out = trim(v); }}});
    } else if (name == "sweep") {
      read_section(name, sec,
                   {{"p", [&](auto& p, auto& v) { cfg.sweep.p = parse_list(p, v); }},
                    {"q", [&](auto& p, auto& v) { cfg.sweep.q = parse_list(p, v); }},
                    {"r", [&](auto& p, auto& v) { cfg.sweep.r = parse_list(p, v); }},
                    {"param", [&](auto&, auto& v) { cfg.sweep.param = trim(v); }},
                    {"values", [&](auto& p, auto& v) { cfg.sweep.values = parse_list(p, v); }},
                    {"oracle", [&](auto& p, auto& v) { cfg.sweep.oracle = parse_bool(p, v); }}});
    } else if (name == "lemma") {
      read_section(name, sec,
                   {{"cases", [&](auto& p, auto& v) { cfg.lemma.cases = parse_count(p, v); }},
                    {"int_equiv_cases", [&](auto& p, auto& v) { cfg.lemma.int_equiv_cases = parse_count(p, v); }},
                    {"suites", [&](auto&, auto& v) { cfg.lemma.suites = split(v, ", \t"); }}});
    } else {
      fail(name, "unknown section");
    }
  }
  const char* names[3] = {"weights.u", "weights.v", "weights.w"};
  for (int i = 0; i < 3; ++i)
    if (!have[i]) fail(names[i], "missing section");
  if (!(cfg.tol > 0.0 && cfg.tol < 1.0)) fail("tolerances.tol", "must lie in (0, 1)");
  if (cfg.k_min > cfg.k_cap) fail("discretize.k_min", "must not exceed k_cap");
  if (!cfg.sweep.param.empty()) {
    const auto dot = cfg.sweep.param.find('.');
    const std::string wname = cfg.sweep.param.substr(0, dot);
    if (dot == std::string::npos || (wname != "u" && wname != "v" && wname != "w"))
      fail("sweep.param", "expected <u|v|w>.<field>, got '" + cfg.sweep.param + "'");
    if (cfg.sweep.values.empty()) fail("sweep.values", "missing for sweep.param");
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("--config: cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const RunConfig& c) {
  std::ostringstream os;
  os << "[instance]\nform = " << to_string(c.form) << "\n\n";
  os << "[interval]\na = " << format_double(c.a) << "\nb = " << format_double(c.b) << "\n\n";
  os << "[parameters]\np = " << format_double(c.params.p) << "\nq = " << format_double(c.params.q)
     << "\nr = " << format_double(c.params.r) << "\n\n";
  write_weight(os, "u", c.u);
  write_weight(os, "v", c.v);
  write_weight(os, "w", c.w);
  os << "[tolerances]\ntol = " << format_double(c.tol) << "\nnodes = " << c.nodes << "\ncell_nodes = " << c.cell_nodes
     << "\n\n";
  os << "[discretize]\nk_min = " << c.k_min << "\nk_cap = " << c.k_cap << "\n\n";
  os << "[oracle]\nbudget = " << c.budget << "\nsteps = " << c.steps << "\nseed = " << c.seed
     << "\nmin_width = " << format_double(c.min_width) << "\n\n";
  os << "[output]\npath = " << c.out << "\n\n";
  os << "[sweep]\n";
  if (!c.sweep.p.empty()) os << "p = " << join(c.sweep.p) << "\n";
  if (!c.sweep.q.empty()) os << "q = " << join(c.sweep.q) << "\n";
  if (!c.sweep.r.empty()) os << "r = " << join(c.sweep.r) << "\n";
  if (!c.sweep.param.empty()) os << "param = " << c.sweep.param << "\n";
  if (!c.sweep.values.empty()) os << "values = " << join(c.sweep.values) << "\n";
  os << "oracle = " << (c.sweep.oracle ? "true" : "false") << "\n\n";
  os << "[lemma]\ncases = " << c.lemma.cases << "\nint_equiv_cases = " << c.lemma.int_equiv_cases << "\nsuites = ";
  for (std::size_t i = 0; i < c.lemma.suites.size(); ++i) os << (i ? ", " : "") << c.lemma.suites[i];
  os << "\n";
  return os.str();
}

}  // namespace chcert
