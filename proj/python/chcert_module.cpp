// SPDX-License-Identifier: Apache-2.0
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <stdexcept>
#include <string>

#include "chcert/commands.hpp"
#include "chcert/conditions.hpp"
#include "chcert/config.hpp"
#include "chcert/discretize.hpp"
#include "chcert/errors.hpp"
#include "chcert/lemma_suites.hpp"
#include "chcert/oracle.hpp"
#include "chcert/transforms.hpp"

namespace py = pybind11;
using namespace chcert;

namespace {

py::dict constant_dict(const ConstantValue& c) {
  py::dict d;
  d["value"] = c.value.value();
  d["diverged"] = c.diverged;
  d["marginal"] = c.marginal;
  d["converged"] = c.converged;
  d["note"] = c.note;
  return d;
}

py::dict report_dict(const ConstantsReport& rep) {
  py::dict d;
  d["regime"] = to_string(rep.regime);
  py::dict cs;
  for (int i = 0; i < 6; ++i)
    if (rep.C[i]) cs[py::str("C" + std::to_string(i + 1))] = constant_dict(*rep.C[i]);
  d["constants"] = cs;
  d["estimate"] = rep.estimate.value();
  d["discrete_estimate"] = rep.discrete_estimate ? py::cast(rep.discrete_estimate->value()) : py::none();
  d["holds"] = to_string(rep.holds);
  d["pathological"] = rep.pathological;
  d["notes"] = rep.notes;
  return d;
}

ConditionOptions condition_options(double tol, std::size_t nodes) {
  ConditionOptions o;
  o.tol = tol;
  o.nodes = nodes;
  return o;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Weight conditions and a ratio oracle for three-weight Copson-Hardy inequalities";
  m.attr("__version__") = kToolVersion;

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);

  py::class_<Interval>(m, "Interval")
      .def(py::init<double, double>(), py::arg("a"), py::arg("b"))
      .def_property_readonly("a", &Interval::a)
      .def_property_readonly("b", &Interval::b)
      .def("__repr__", [](const Interval& I) {
        return "Interval(" + format_double(I.a()) + ", " + format_double(I.b()) + ")";
      });

  py::class_<WeightExpr>(m, "Weight")
      .def_static("constant", &WeightExpr::constant, py::arg("domain"), py::arg("c"))
      .def_static("power", &WeightExpr::power, py::arg("domain"), py::arg("c"), py::arg("alpha"),
                  py::arg("center") = 0.0)
      .def_static("power_log", &WeightExpr::power_log, py::arg("domain"), py::arg("c"), py::arg("alpha"),
                  py::arg("beta"), py::arg("center") = 0.0)
      .def_static("exponential", &WeightExpr::exponential, py::arg("domain"), py::arg("c"), py::arg("gamma"))
      .def_static("tabulated", &WeightExpr::tabulated, py::arg("domain"), py::arg("breaks"), py::arg("values"))
      .def_property_readonly("domain", &WeightExpr::domain)
      .def("__call__", &WeightExpr::eval)
      .def("integral", [](const WeightExpr& w, double lo, double hi) { return w.integral(lo, hi).value(); })
      .def("reflected", &WeightExpr::reflected)
      .def(py::self == py::self);

  py::class_<Parameters>(m, "Parameters")
      .def(py::init([](double p, double q, double r) { return Parameters{p, q, r}; }), py::arg("p"), py::arg("q"),
           py::arg("r"))
      .def_readwrite("p", &Parameters::p)
      .def_readwrite("q", &Parameters::q)
      .def_readwrite("r", &Parameters::r)
      .def("regime", [](const Parameters& P) { return to_string(classify_regime(P)); })
      .def("__repr__", [](const Parameters& P) {
        return "Parameters(" + format_double(P.p) + ", " + format_double(P.q) + ", " + format_double(P.r) + ")";
      });

  py::class_<WeightTriple>(m, "WeightTriple")
      .def(py::init([](WeightExpr u, WeightExpr v, WeightExpr w) { return WeightTriple{u, v, w}; }), py::arg("u"),
           py::arg("v"), py::arg("w"))
      .def_readonly("u", &WeightTriple::u)
      .def_readonly("v", &WeightTriple::v)
      .def_readonly("w", &WeightTriple::w);

  m.def(
      "compute_C",
      [](int i, const WeightTriple& tr, const Parameters& P, double tol, std::size_t nodes) {
        return constant_dict(compute_C(i, tr, P, condition_options(tol, nodes)));
      },
      py::arg("index"), py::arg("triple"), py::arg("params"), py::arg("tol") = 1e-8, py::arg("nodes") = 2048);

  m.def(
      "certify",
      [](const WeightTriple& tr, const Parameters& P, double tol, std::size_t nodes) {
        return report_dict(certify(tr, P, condition_options(tol, nodes)));
      },
      py::arg("triple"), py::arg("params"), py::arg("tol") = 1e-8, py::arg("nodes") = 2048);

  m.def(
      "discretize",
      [](const WeightExpr& w, int k_min, int k_cap) {
        const auto s = discretizing_sequence(w, k_min, k_cap);
        py::dict d;
        d["M"] = s.M ? py::cast(*s.M) : py::none();
        d["k_min"] = s.k_min;
        d["k_top"] = s.k_top;
        d["x"] = s.x;
        d["window_shifted"] = s.window_shifted;
        return d;
      },
      py::arg("w"), py::arg("k_min") = kDefaultKMin, py::arg("k_cap") = kDefaultKCap);

  m.def(
      "maximize_ratio",
      [](const WeightTriple& tr, const Parameters& P, const std::string& form, std::size_t budget,
         std::uint64_t seed) {
        OracleOptions o;
        o.restarts = budget;
        o.seed = seed;
        const auto r = maximize_ratio(ProblemInstance(form_from_string(form), P, tr), o);
        py::dict d;
        d["lower_bound"] = r.lower_bound.value();
        d["best_strategy"] = r.best_strategy;
        d["breaks"] = r.best_f.breaks;
        d["values"] = r.best_f.values;
        d["trace"] = r.trace;
        d["evaluations"] = r.evaluations;
        return d;
      },
      py::arg("triple"), py::arg("params"), py::arg("form") = "canonical", py::arg("budget") = 64,
      py::arg("seed") = 1);

  m.def(
      "run_lemma_suite",
      [](const std::string& name, std::size_t cases, std::uint64_t seed) {
        const auto r = run_lemma_suite(name, cases, seed);
        py::dict d;
        d["name"] = r.name;
        d["cases"] = r.cases;
        d["failures"] = r.failures;
        d["max_rel_diff"] = r.max_rel_diff;
        d["failure_examples"] = r.failure_examples;
        return d;
      },
      py::arg("name"), py::arg("cases") = 1000, py::arg("seed") = 1);
  m.def("lemma_suite_names", &lemma_suite_names);

  // Report text exactly as the command line tool writes it.
  m.def(
      "run_command",
      [](const std::string& command, const std::string& config_text, bool timings) {
        const auto cfg = parse_config(config_text);
        if (command == "certify") return cmd_certify(cfg, timings);
        if (command == "discretize") return cmd_discretize(cfg, timings);
        if (command == "oracle") return cmd_oracle(cfg, timings);
        if (command == "lemma-test") return cmd_lemma_test(cfg, timings);
        if (command == "sweep") return cmd_sweep(cfg);
        throw InvalidRequestError("unknown command: " + command);
      },
      py::arg("command"), py::arg("config_text"), py::arg("timings") = false);
}
