// SPDX-License-Identifier: Apache-2.0
#include "chcert/commands.hpp"

#include <chrono>
#include <cmath>
#include <json.hpp>
#include <map>
#include <sstream>

#include "chcert/errors.hpp"
#include "chcert/lemma_suites.hpp"

namespace chcert {

using json = nlohmann::ordered_json;

namespace {

json num(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return nullptr;
  return x;
}

json num(const ExtendedReal& x) { return num(x.value()); }

json weight_json(const WeightSpec& w) {
  json j;
  j["kind"] = w.kind;
  if (w.kind == "tabulated") {
    j["breaks"] = json::array();
    for (double x : w.breaks) j["breaks"].push_back(num(x));
    j["values"] = json::array();
    for (double x : w.values) j["values"].push_back(num(x));
  } else if (w.kind == "pieces") {
    j["pieces"] = json::array();
    for (const auto& p : w.pieces)
      j["pieces"].push_back({{"lo", num(p.lo)},
                             {"hi", num(p.hi)},
                             {"kind", to_string(p.atom.kind)},
                             {"c", p.atom.c},
                             {"alpha", p.atom.alpha},
                             {"beta", p.atom.beta},
                             {"gamma", p.atom.gamma},
                             {"center", p.atom.center}});
  } else {
    const std::map<std::string, double> field{
        {"c", w.c}, {"alpha", w.alpha}, {"beta", w.beta}, {"gamma", w.gamma}, {"center", w.center}};
    for (const auto& key : weight_keys(w.kind)) j[key] = field.at(key);
  }
  return j;
}

json list_json(const std::vector<double>& xs) {
  json j = json::array();
  for (double x : xs) j.push_back(num(x));
  return j;
}

json config_json(const RunConfig& c) {
  json j;
  j["instance"] = {{"form", to_string(c.form)}};
  j["interval"] = {{"a", num(c.a)}, {"b", num(c.b)}};
  j["parameters"] = {{"p", c.params.p}, {"q", c.params.q}, {"r", c.params.r}};
  j["weights"] = {{"u", weight_json(c.u)}, {"v", weight_json(c.v)}, {"w", weight_json(c.w)}};
  j["tolerances"] = {{"tol", c.tol}, {"nodes", c.nodes}, {"cell_nodes", c.cell_nodes}};
  j["discretize"] = {{"k_min", c.k_min}, {"k_cap", c.k_cap}};
  j["oracle"] = {{"budget", c.budget}, {"steps", c.steps}, {"seed", c.seed}, {"min_width", c.min_width}};
  j["output"] = {{"path", c.out}};
  j["sweep"] = {{"p", list_json(c.sweep.p)},
                {"q", list_json(c.sweep.q)},
                {"r", list_json(c.sweep.r)},
                {"param", c.sweep.param},
                {"values", list_json(c.sweep.values)},
                {"oracle", c.sweep.oracle}};
  j["lemma"] = {{"cases", c.lemma.cases}, {"int_equiv_cases", c.lemma.int_equiv_cases}, {"suites", c.lemma.suites}};
  return j;
}

json header(const std::string& command, const RunConfig& cfg) {
  json j;
  j["schema_version"] = kReportSchemaVersion;
  j["tool"] = {{"name", "chcert"}, {"version", kToolVersion}};
  j["command"] = command;
  j["config"] = config_json(cfg);
  j["config_ini"] = serialize_config(cfg);
  return j;
}

json params_json(const Parameters& p) { return {{"p", p.p}, {"q", p.q}, {"r", p.r}}; }

json sequence_json(const DiscretizingSequence& s, bool levels) {
  json j;
  j["M"] = s.M ? json(*s.M) : json("inf");
  j["k_min"] = s.k_min;
  j["k_top"] = s.k_top;
  j["cells"] = s.cells();
  j["w_total"] = num(s.w_total);
  j["lower_truncated"] = s.lower_truncated;
  j["upper_truncated"] = s.upper_truncated;
  j["window_shifted"] = s.window_shifted;
  j["tol"] = s.tol;
  if (levels) {
    j["levels"] = json::array();
    for (int k = s.k_min; k <= s.k_top; ++k) {
      const auto i = std::size_t(k - s.k_min);
      j["levels"].push_back({{"k", k}, {"x", num(s.x[i])}, {"W", num(s.W_at[i])}});
    }
  }
  return j;
}

json constant_json(const std::optional<ConstantValue>& c) {
  if (!c) return nullptr;
  json j;
  j["value"] = num(c->value);
  j["diverged"] = c->diverged;
  j["converged"] = c->converged;
  j["marginal"] = c->marginal;
  j["error_estimate"] = num(c->error_estimate);
  j["note"] = c->note;
  return j;
}

json discrete_json(const DiscreteConstant& d) {
  if (!d.computed) return nullptr;
  return {{"value", num(d.value)}, {"tail_fraction", num(d.tail_fraction)}, {"status", to_string(d.status)}};
}

struct Certified {
  ConstantsReport report;
  ProblemInstance instance;
  ProblemInstance canonical;
};

Certified run_certify(const RunConfig& cfg) {
  auto inst = cfg.instance();
  auto canon = canonical_image(inst);
  auto rep = certify(canon.triple, canon.params, cfg.condition_options());
  if (inst.form == Form::Swapped)
    rep.notes.push_back("constants computed on the reflected canonical instance; the best constants coincide");
  if (inst.form == Form::RhsWeighted)
    rep.notes.push_back("constants computed on the canonical preimage; the best constant of this form is the "
                        "canonical one raised to the power 1/p");
  return {std::move(rep), std::move(inst), std::move(canon)};
}

// Best-constant scale of the configured form relative to the canonical image.
double form_power(const ProblemInstance& inst) { return inst.form == Form::RhsWeighted ? 1.0 / inst.params.p : 1.0; }

json certify_json(const Certified& c) {
  const auto& rep = c.report;
  json j;
  j["instance"] = {{"form", to_string(c.instance.form)},
                   {"interval", {{"a", num(c.instance.domain().a())}, {"b", num(c.instance.domain().b())}}},
                   {"parameters", params_json(c.instance.params)}};
  if (c.instance.form != Form::Canonical) j["canonical_image"] = {{"parameters", params_json(c.canonical.params)}};
  j["regime"] = to_string(rep.regime);
  json C;
  for (int i = 0; i < 6; ++i) C["C" + std::to_string(i + 1)] = constant_json(rep.C[std::size_t(i)]);
  j["constants"] = C;
  j["estimate"] = num(rep.estimate);
  j["estimate_for_form"] = num(ext::pow(rep.estimate.value(), form_power(c.instance)));
  json D;
  if (rep.discrete) {
    for (int i = 0; i < 4; ++i) D["A" + std::to_string(i + 1)] = discrete_json(rep.discrete->A[std::size_t(i)]);
    for (int i = 0; i < 2; ++i) D["B" + std::to_string(i + 1)] = discrete_json(rep.discrete->B[std::size_t(i)]);
  }
  j["discrete"] = rep.discrete ? D : json(nullptr);
  j["discrete_estimate"] = rep.discrete_estimate ? num(*rep.discrete_estimate) : json(nullptr);
  if (rep.discrete_estimate && rep.estimate.is_finite() && rep.discrete_estimate->is_finite() &&
      rep.discrete_estimate->value() > 0.0)
    j["continuum_over_discrete"] = rep.estimate.value() / rep.discrete_estimate->value();
  else
    j["continuum_over_discrete"] = nullptr;
  j["holds"] = to_string(rep.holds);
  j["pathological"] = rep.pathological;
  j["sequence"] = rep.sequence ? sequence_json(*rep.sequence, false) : json(nullptr);
  j["notes"] = rep.notes;
  return j;
}

json oracle_json(const OracleResult& r, const OracleOptions& o) {
  json j;
  j["lower_bound"] = num(r.lower_bound);
  j["best_strategy"] = r.best_strategy;
  j["best_f"] = {{"breaks", list_json(r.best_f.breaks)}, {"values", list_json(r.best_f.values)}};
  j["delta_limit"] = r.delta_limit ? num(*r.delta_limit) : json(nullptr);
  j["trace"] = list_json(r.trace);
  j["seed"] = r.seed;
  j["budget"] = o.restarts;
  j["steps"] = o.steps;
  j["evaluations"] = r.evaluations;
  j["rejected"] = r.rejected;
  return j;
}

using Clock = std::chrono::steady_clock;

std::string finish(json& j, bool timings, Clock::time_point t0) {
  if (timings) j["timings"] = {{"wall_seconds", std::chrono::duration<double>(Clock::now() - t0).count()}};
  return j.dump(2) + "\n";
}

}  // namespace

std::string cmd_certify(const RunConfig& cfg, bool timings) {
  const auto t0 = Clock::now();
  auto j = header("certify", cfg);
  const auto c = run_certify(cfg);
  j["tolerances"] = {{"tol", cfg.tol}, {"nodes", cfg.nodes}, {"cell_nodes", cfg.cell_nodes}};
  j.update(certify_json(c));
  return finish(j, timings, t0);
}

std::string cmd_discretize(const RunConfig& cfg, bool timings) {
  const auto t0 = Clock::now();
  auto j = header("discretize", cfg);
  const auto inst = canonical_image(cfg.instance());
  try {
    const auto seq = discretizing_sequence(inst.triple.w, cfg.k_min, cfg.k_cap, cfg.tol);
    j["pathological"] = false;
    j["sequence"] = sequence_json(seq, true);
  } catch (const PathologicalWeightError& e) {
    j["pathological"] = true;
    j["sequence"] = nullptr;
    j["notes"] = {e.what()};
  }
  return finish(j, timings, t0);
}

std::string cmd_oracle(const RunConfig& cfg, bool timings) {
  const auto t0 = Clock::now();
  auto j = header("oracle", cfg);
  const auto inst = cfg.instance();
  const auto o = cfg.oracle_options();
  const auto res = maximize_ratio(inst, o);
  j["instance"] = {{"form", to_string(inst.form)}, {"parameters", params_json(inst.params)}};
  j["oracle"] = oracle_json(res, o);
  return finish(j, timings, t0);
}

std::string cmd_lemma_test(const RunConfig& cfg, bool timings) {
  const auto t0 = Clock::now();
  auto j = header("lemma-test", cfg);
  json suites = json::array();
  std::size_t failures = 0;
  for (const auto& name : cfg.lemma.suites) {
    const std::size_t n = name == "int-equiv" ? cfg.lemma.int_equiv_cases : cfg.lemma.cases;
    SuiteResult r;
    try {
      r = run_lemma_suite(name, n, cfg.seed);
    } catch (const DomainError& e) {
      throw ConfigError(std::string("lemma.suites: ") + e.what());
    }
    failures += r.failures;
    json s;
    s["name"] = r.name;
    s["cases"] = r.cases;
    s["failures"] = r.failures;
    s["max_rel_diff"] = num(r.max_rel_diff);
    json b = json::array();
    for (const auto& k : r.buckets)
      b.push_back({{"label", k.label},
                   {"cases", k.cases},
                   {"min_ratio", num(k.min_ratio)},
                   {"max_ratio", num(k.max_ratio)},
                   {"bracket", {num(k.bracket_lower), num(k.bracket_upper)}},
                   {"max_upper_use", num(k.max_upper_use)},
                   {"min_lower_use", num(k.min_lower_use)}});
    s["worst_ratios"] = b;
    s["failure_examples"] = r.failure_examples;
    suites.push_back(s);
  }
  j["seed"] = cfg.seed;
  j["suites"] = suites;
  j["total_failures"] = failures;
  return finish(j, timings, t0);
}

const std::vector<std::string>& sweep_columns() {
  static const std::vector<std::string> cols{
      "form", "p",  "q",  "r",  "param", "param_value", "regime", "C1", "C2", "C3", "C4", "C5", "C6", "estimate",
      "A1",   "A2", "A3", "A4", "B1",    "B2",          "discrete_estimate", "holds", "oracle_lower_bound",
      "continuum_over_discrete", "oracle_over_estimate", "note"};
  return cols;
}

namespace {

std::string cell(double x) { return format_double(x); }

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string o = "\"";
  for (char ch : s) o += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return o + "\"";
}

std::vector<double> or_base(const std::vector<double>& xs, double base) {
  return xs.empty() ? std::vector<double>{base} : xs;
}

}  // namespace

std::string cmd_sweep(const RunConfig& cfg) {
  std::ostringstream os;
  const auto& cols = sweep_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
  os << "\n";
  const bool fam = !cfg.sweep.param.empty();
  const auto values = fam ? cfg.sweep.values : std::vector<double>{0.0};
  for (double p : or_base(cfg.sweep.p, cfg.params.p))
    for (double q : or_base(cfg.sweep.q, cfg.params.q))
      for (double r : or_base(cfg.sweep.r, cfg.params.r))
        for (double val : values) {
          RunConfig c = cfg;
          c.params = {p, q, r};
          if (fam) {
            const char which = cfg.sweep.param[0];
            const std::string field = cfg.sweep.param.substr(2);
            WeightSpec& ws = which == 'u' ? c.u : which == 'v' ? c.v : c.w;
            try {
              ws.set(field, val);
            } catch (const ConfigError& e) {
              throw ConfigError(std::string("sweep.param: ") + e.what());
            }
          }
          std::vector<std::string> row(cols.size());
          row[0] = to_string(c.form);
          row[1] = cell(p);
          row[2] = cell(q);
          row[3] = cell(r);
          row[4] = cfg.sweep.param;
          row[5] = fam ? cell(val) : "";
          try {
            const auto inst = c.instance();
            const auto res = run_certify(c);
            const auto& rep = res.report;
            row[6] = to_string(rep.regime);
            for (int i = 0; i < 6; ++i)
              if (rep.C[std::size_t(i)]) row[7 + std::size_t(i)] = cell(rep.C[std::size_t(i)]->value.value());
            row[13] = cell(rep.estimate.value());
            if (rep.discrete) {
              for (int i = 0; i < 4; ++i)
                if (rep.discrete->A[std::size_t(i)].computed)
                  row[14 + std::size_t(i)] = cell(rep.discrete->A[std::size_t(i)].value.value());
              for (int i = 0; i < 2; ++i)
                if (rep.discrete->B[std::size_t(i)].computed)
                  row[18 + std::size_t(i)] = cell(rep.discrete->B[std::size_t(i)].value.value());
            }
            if (rep.discrete_estimate) row[20] = cell(rep.discrete_estimate->value());
            row[21] = to_string(rep.holds);
            const double est = ext::pow(rep.estimate.value(), form_power(inst));
            if (cfg.sweep.oracle) {
              const auto orc = maximize_ratio(inst, c.oracle_options());
              row[22] = cell(orc.lower_bound.value());
              if (std::isfinite(est) && est > 0.0 && orc.lower_bound.is_finite())
                row[24] = cell(orc.lower_bound.value() / est);
            }
            if (rep.discrete_estimate && rep.estimate.is_finite() && rep.discrete_estimate->is_finite() &&
                rep.discrete_estimate->value() > 0.0)
              row[23] = cell(rep.estimate.value() / rep.discrete_estimate->value());
          } catch (const NumericalError& e) {
            row[21] = "error";
            row[25] = e.what();
          } catch (const DomainError& e) {
            // Grid points outside the admissible parameter range stay in the grid.
            row[21] = "invalid";
            row[25] = e.what();
          }
          for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_escape(row[i]);
          os << "\n";
        }
  return os.str();
}

}  // namespace chcert
