// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "chcert/conditions.hpp"
#include "chcert/oracle.hpp"
#include "chcert/transforms.hpp"
#include "chcert/weights.hpp"

namespace chcert {

/// One weight as written in a config section `weights.<name>`.
///   kind = constant | power | power_log | exponential | tabulated | pieces
/// Single-atom kinds read c, alpha, beta, gamma, center. `tabulated` reads
/// `breaks` and `values` (whitespace or comma separated). `pieces` reads
/// `pieces = lo hi kind c alpha beta gamma center; ...`.
struct WeightSpec {
  std::string kind = "constant";
  double c = 1.0;
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double center = 0.0;
  std::vector<double> breaks;
  std::vector<double> values;
  std::vector<Piece> pieces;

  WeightExpr build(Interval domain) const;
  /// Sets one of c, alpha, beta, gamma, center by name (sweeps).
  void set(const std::string& field, double value);
  friend bool operator==(const WeightSpec&, const WeightSpec&) = default;
};

/// Keys a weight kind reads besides `kind`, in file order; empty for an unknown kind.
const std::vector<std::string>& weight_keys(const std::string& kind);

struct SweepSpec {
  std::vector<double> p, q, r;  ///< empty: the base parameter
  std::string param;            ///< optional weight family parameter, e.g. "u.alpha"
  std::vector<double> values;
  bool oracle = true;
  friend bool operator==(const SweepSpec&, const SweepSpec&) = default;
};

struct LemmaSpec {
  std::size_t cases = 1000;
  std::size_t int_equiv_cases = 200;
  std::vector<std::string> suites{"abel", "sup-sup", "tail-power", "sum-sum", "sum-sup", "sup-sum", "int-equiv", "vp-split"};
  friend bool operator==(const LemmaSpec&, const LemmaSpec&) = default;
};

struct RunConfig {
  Form form = Form::Canonical;
  double a = 0.0;
  double b = 1.0;
  Parameters params;
  WeightSpec u, v, w;

  double tol = 1e-8;
  std::size_t nodes = 2048;
  std::size_t cell_nodes = 256;
  int k_min = kDefaultKMin;
  int k_cap = kDefaultKCap;

  std::size_t budget = 64;
  std::size_t steps = 200;
  std::uint64_t seed = 1;
  double min_width = 1e-6;

  std::string out = "-";  ///< report path, "-" for stdout

  SweepSpec sweep;
  LemmaSpec lemma;

  ProblemInstance instance() const;
  ConditionOptions condition_options() const;
  OracleOptions oracle_options() const;
  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Parses the sectioned key-value text. Weights are required; everything else
/// has a default. Throws ConfigError whose message starts with the field path.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
/// Inverse of parse_config: parse_config(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& cfg);

/// Shortest decimal text that reads back to the same double; "inf"/"-inf" for infinities.
std::string format_double(double x);

}  // namespace chcert
