// SPDX-License-Identifier: Apache-2.0
// chcert: command-line front end.
//
//   chcert certify    --config run.ini [--tol X] [--depth KMIN:KCAP] [--out PATH]
//   chcert discretize --config run.ini
//   chcert oracle     --config run.ini [--seed N] [--budget N]
//   chcert sweep      --config run.ini
//   chcert lemma-test --config run.ini [--seed N]
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure.

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

#include "chcert/commands.hpp"
#include "chcert/errors.hpp"

namespace {

struct Overrides {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> budget;
  std::optional<std::string> out;
  std::optional<double> tol;
  std::optional<std::string> depth;
  bool timings = false;
};

void add_common(CLI::App* sub, Overrides& o) {
  sub->add_option("--config", o.config, "instance configuration (sectioned key-value text)")->required();
  sub->add_option("--seed", o.seed, "random seed for the oracle and lemma suites");
  sub->add_option("--budget", o.budget, "oracle restarts");
  sub->add_option("--out", o.out, "report path ('-' for stdout)");
  sub->add_option("--tol", o.tol, "relative tolerance");
  sub->add_option("--depth", o.depth, "discretization window K_MIN:K_CAP");
  sub->add_flag("--timings", o.timings, "append wall-clock timings to the report");
}

chcert::RunConfig effective_config(const Overrides& o) {
  auto cfg = chcert::load_config(o.config);
  if (o.seed) cfg.seed = *o.seed;
  if (o.budget) {
    if (*o.budget == 0) throw chcert::ConfigError("--budget: must be positive");
    cfg.budget = *o.budget;
  }
  if (o.out) cfg.out = *o.out;
  if (o.tol) {
    if (!(*o.tol > 0.0 && *o.tol < 1.0)) throw chcert::ConfigError("--tol: must lie in (0, 1)");
    cfg.tol = *o.tol;
  }
  if (o.depth) {
    const auto colon = o.depth->find(':');
    try {
      if (colon == std::string::npos) throw std::invalid_argument("no colon");
      std::size_t used = 0;
      const std::string lo = o.depth->substr(0, colon), hi = o.depth->substr(colon + 1);
      cfg.k_min = std::stoi(lo, &used);
      if (used != lo.size()) throw std::invalid_argument("trailing");
      cfg.k_cap = std::stoi(hi, &used);
      if (used != hi.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw chcert::ConfigError("--depth: expected K_MIN:K_CAP, got '" + *o.depth + "'");
    }
    if (cfg.k_min > cfg.k_cap) throw chcert::ConfigError("--depth: K_MIN must not exceed K_CAP");
  }
  return cfg;
}

void emit(const std::string& path, const std::string& text) {
  if (path == "-" || path.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw chcert::ConfigError("output.path: cannot write '" + path + "'");
  f << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certifier for the three-weight Copson-Hardy inequality"};
  app.set_version_flag("--version", chcert::kToolVersion);
  app.require_subcommand(1);

  Overrides o;
  auto* certify = app.add_subcommand("certify", "continuum and discrete constants, regime and verdict");
  auto* discretize = app.add_subcommand("discretize", "dyadic level points of W");
  auto* oracle = app.add_subcommand("oracle", "randomized lower bound for the best constant");
  auto* sweep = app.add_subcommand("sweep", "grid over parameters and a weight family (CSV)");
  auto* lemma = app.add_subcommand("lemma-test", "randomized suites for the sequence lemmas");
  for (auto* s : {certify, discretize, oracle, sweep, lemma}) add_common(s, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    const auto cfg = effective_config(o);
    std::string text;
    if (*certify) text = chcert::cmd_certify(cfg, o.timings);
    else if (*discretize) text = chcert::cmd_discretize(cfg, o.timings);
    else if (*oracle) text = chcert::cmd_oracle(cfg, o.timings);
    else if (*sweep) text = chcert::cmd_sweep(cfg);
    else text = chcert::cmd_lemma_test(cfg, o.timings);
    emit(cfg.out, text);
    return 0;
  } catch (const chcert::DomainError& e) {
    std::cerr << "chcert: configuration error: " << e.what() << "\n";
    return 2;
  } catch (const chcert::NumericalError& e) {
    std::cerr << "chcert: numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "chcert: numerical failure: " << e.what() << "\n";
    return 3;
  }
}
