#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "germlie/complexify.hpp"
#include "germlie/errors.hpp"
#include "germlie/liegroup.hpp"
#include "germlie/suites.hpp"

namespace py = pybind11;
using namespace germlie;

namespace {

RunConfig make_config(const std::string& suite, std::uint64_t seed, std::optional<int> trials, double r,
                      double rho0, int degree, int bch_order, int steps, int dim) {
  RunConfig c;
  c.suite = suite;
  c.seed = seed;
  c.trials = trials;
  c.r = r;
  c.rho0 = rho0;
  c.degree = degree;
  c.bch_order = bch_order;
  c.steps = steps;
  c.dim = dim;
  c.validate();
  return c;
}

CheckReport run_check(const std::string& name, const RunConfig& c) {
  static const std::map<std::string, CheckReport (*)(const RunConfig&)> checks{
      {"bch_pairs", check_bch_pairs},
      {"local_axioms", check_local_axioms},
      {"sup_estimate", check_sup_estimate},
      {"compact_regularity", check_compact_regularity},
      {"factorization", check_factorization},
      {"union_strategy", check_union_strategy},
      {"cross_basis", check_cross_basis},
      {"exp_log", check_exp_log},
      {"group_axioms", check_group_axioms},
      {"adjoint", check_adjoint},
      {"evolution", check_evolution},
      {"roundtrips", check_roundtrips},
      {"complexification", check_complexification},
  };
  const auto it = checks.find(name);
  if (it == checks.end()) throw PreconditionError("unknown check '" + name + "'");
  return it->second(c);
}

}  // namespace

PYBIND11_MODULE(_germlie, m) {
  m.doc() = "Bindings for the germlie C++ core";

  py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_ValueError);
  py::register_exception<StructuralError>(m, "StructuralError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ArithmeticError);
  py::register_exception<EvaluationError>(m, "EvaluationError", PyExc_RuntimeError);

  m.def("suite_names", &suite_names);

  m.def(
      "run_suite_json",
      [](const std::string& suite, std::uint64_t seed, std::optional<int> trials, double r, double rho0, int degree,
         int bch_order, int steps, int dim) {
        const RunConfig c = make_config(suite, seed, trials, r, rho0, degree, bch_order, steps, dim);
        SuiteRun run;
        {
          py::gil_scoped_release release;
          run = run_suite(c);
        }
        return report_json(c, run).dump();
      },
      py::arg("suite") = "all", py::arg("seed") = 0, py::arg("trials") = py::none(), py::arg("r") = 0.1,
      py::arg("rho0") = 1.0, py::arg("degree") = 12, py::arg("bch_order") = 8, py::arg("steps") = 64,
      py::arg("dim") = 2);

  m.def(
      "run_check_json",
      [](const std::string& name, std::uint64_t seed, std::optional<int> trials, double r, double rho0, int degree,
         int bch_order, int steps, int dim) {
        const RunConfig c = make_config("all", seed, trials, r, rho0, degree, bch_order, steps, dim);
        py::gil_scoped_release release;
        return run_check(name, c).to_json().dump();
      },
      py::arg("name"), py::arg("seed") = 0, py::arg("trials") = py::none(), py::arg("r") = 0.1,
      py::arg("rho0") = 1.0, py::arg("degree") = 12, py::arg("bch_order") = 8, py::arg("steps") = 64,
      py::arg("dim") = 2);

  m.def(
      "bch",
      [](const Mat& x, const Mat& y, int order) {
        const MatrixLieBackend lie(static_cast<int>(x.rows()), order);
        const auto z = lie.bch_with_remainder(x, y);
        return py::make_tuple(z.value, z.remainder);
      },
      py::arg("x"), py::arg("y"), py::arg("order") = 8,
      "Truncated BCH product and the bound for the omitted orders.");
  m.def("expm", &exp_mat, py::arg("x"));
  m.def("logm", &log_mat, py::arg("g"));
  m.def(
      "lie_norm", [](const Mat& x) { return 2.0 * operator_norm(x); }, py::arg("x"));

  m.def(
      "certify_atlas_json",
      [](const std::string& atlas_json, double height) {
        const auto ca = extend_transitions(RealAtlas::from_json(json::parse(atlas_json)), height);
        return certify_cocycles(ca).to_json().dump();
      },
      py::arg("atlas_json"), py::arg("height") = 0.5);
  m.def(
      "example_atlas_json",
      [](const std::string& name) {
        if (name == "circle") return circle_atlas().to_json().dump();
        if (name == "tan") return tan_atlas().to_json().dump();
        if (name == "interval") return interval_atlas().to_json().dump();
        throw PreconditionError("unknown example atlas '" + name + "'");
      },
      py::arg("name"));
}
