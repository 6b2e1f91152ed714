#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "snumbers/bounds.hpp"
#include "snumbers/extremal.hpp"
#include "snumbers/operators.hpp"
#include "snumbers/version.hpp"

namespace py = pybind11;
using namespace snumbers;

namespace {

py::array_t<double> to_array(const GridFunction& f) {
  const auto v = f.values();
  return py::array_t<double>(static_cast<py::ssize_t>(v.size()), v.data());
}

Grid make_grid(double a, double b, std::size_t m) {
  const Interval I(a, b);
  return m == 0 ? Grid::with_density(I, default_nodes_per_unit()) : Grid(I, m);
}

}  // namespace

PYBIND11_MODULE(_snumbers, m) {
  m.doc() = "Extremal constants and s-number bounds for second-order Sobolev embeddings";
  m.attr("__version__") = std::string(kVersion);

  py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);

  py::enum_<ExtremalKind>(m, "ExtremalKind")
      .value("J0", ExtremalKind::J0)
      .value("Ja", ExtremalKind::Ja)
      .value("Jb", ExtremalKind::Jb)
      .value("Aplus", ExtremalKind::Aplus)
      .value("Aminus", ExtremalKind::Aminus)
      .value("B", ExtremalKind::Bconst);

  py::enum_<TargetOperator>(m, "Target")
      .value("E", TargetOperator::E_full)
      .value("Ea", TargetOperator::E_a)
      .value("T2", TargetOperator::T2);

  py::class_<ExtremalSolution>(m, "ExtremalSolution")
      .def_readonly("p", &ExtremalSolution::p)
      .def_readonly("value", &ExtremalSolution::value)
      .def_readonly("eigenvalue", &ExtremalSolution::eigenvalue)
      .def_readonly("residual", &ExtremalSolution::residual)
      .def_readonly("iterations", &ExtremalSolution::iterations)
      .def_readonly("converged", &ExtremalSolution::converged)
      .def_property_readonly("kind", [](const ExtremalSolution& s) { return s.kind; })
      .def_property_readonly("nodes", [](const ExtremalSolution& s) { return s.extremal.grid().nodes(); })
      .def_property_readonly("extremal", [](const ExtremalSolution& s) { return to_array(s.extremal); })
      .def_property_readonly("curvature", [](const ExtremalSolution& s) { return to_array(s.curvature); })
      .def("__repr__", [](const ExtremalSolution& s) {
        return "<ExtremalSolution " + std::string(to_string(s.kind)) + " value=" + std::to_string(s.value) + ">";
      });

  m.def(
      "solve",
      [](ExtremalKind kind, double p, double a, double b, std::size_t nodes, double tol) {
        return solve(kind, p, make_grid(a, b, nodes), {tol, 10000});
      },
      py::arg("kind"), py::arg("p"), py::arg("a") = 0.0, py::arg("b") = 1.0, py::arg("nodes") = 0,
      py::arg("tol") = 1e-8, "Solve one extremal problem; nodes=0 uses the default density.");

  m.def(
      "best_constant_shift",
      [](const std::vector<double>& values, double a, double b, double p) {
        const auto r = best_constant_shift(GridFunction(Grid(Interval(a, b), values.size()), values), p);
        return py::make_tuple(r.lambda_star, r.min_norm);
      },
      py::arg("values"), py::arg("a"), py::arg("b"), py::arg("p"),
      "Minimizer and minimum of lambda -> ||f - lambda||_p for uniformly sampled f.");

  m.def(
      "partition_upper",
      [](TargetOperator t, double a, double b, int n) { return partition_upper(t, Interval(a, b), n).breakpoints; },
      py::arg("target"), py::arg("a"), py::arg("b"), py::arg("n"));
  m.def(
      "partition_lower",
      [](TargetOperator t, double a, double b, int n) { return partition_lower(t, Interval(a, b), n).breakpoints; },
      py::arg("target"), py::arg("a"), py::arg("b"), py::arg("n"));
  m.def(
      "upper_bound_value",
      [](TargetOperator t, double a, double b, int n, double p, double b01) {
        return upper_bound_value(t, Interval(a, b), n, p, b01);
      },
      py::arg("target"), py::arg("a"), py::arg("b"), py::arg("n"), py::arg("p"), py::arg("b01"));
  m.def(
      "lower_bound_value",
      [](TargetOperator t, double a, double b, int n, double b01) { return lower_bound_value(t, Interval(a, b), n, b01); },
      py::arg("target"), py::arg("a"), py::arg("b"), py::arg("n"), py::arg("b01"));
  m.def("unit_b_constant", &unit_b_constant, py::arg("p"), py::arg("nodes_per_unit") = 0);

  py::class_<BoundCertificate>(m, "BoundCertificate")
      .def_property_readonly("target", [](const BoundCertificate& c) { return c.target; })
      .def_property_readonly("side",
                             [](const BoundCertificate& c) { return c.side == BoundSide::Upper ? "upper" : "lower"; })
      .def_readonly("n", &BoundCertificate::n)
      .def_readonly("p", &BoundCertificate::p)
      .def_readonly("bound_value", &BoundCertificate::bound_value)
      .def_readonly("trials", &BoundCertificate::trials)
      .def_readonly("seed", &BoundCertificate::seed)
      .def_readonly("worst_ratio", &BoundCertificate::worst_ratio)
      .def_readonly("margin", &BoundCertificate::margin)
      .def_readonly("tolerance", &BoundCertificate::tolerance)
      .def_readonly("passed", &BoundCertificate::passed);

  auto certify = [](bool upper) {
    return [upper](TargetOperator t, int n, double p, int trials, std::uint64_t seed, double a, double b,
                   std::size_t nodes_per_unit, double tolerance) {
      CertifyOptions o;
      o.tolerance = tolerance;
      o.nodes_per_unit = nodes_per_unit;
      const Interval I(a, b);
      return upper ? certify_upper(t, I, n, p, trials, seed, o) : certify_lower(t, I, n, p, trials, seed, o);
    };
  };
  m.def("certify_upper", certify(true), py::arg("target"), py::arg("n"), py::arg("p"), py::arg("trials") = 500,
        py::arg("seed") = 0, py::arg("a") = 0.0, py::arg("b") = 1.0, py::arg("nodes_per_unit") = 0,
        py::arg("tolerance") = 1e-3);
  m.def("certify_lower", certify(false), py::arg("target"), py::arg("n"), py::arg("p"), py::arg("trials") = 500,
        py::arg("seed") = 0, py::arg("a") = 0.0, py::arg("b") = 1.0, py::arg("nodes_per_unit") = 0,
        py::arg("tolerance") = 1e-3);

  m.def(
      "snumber_table",
      [](TargetOperator t, double p, int n_min, int n_max, double b01, double a, double b,
         const std::vector<double>& oracle) {
        const auto tab = snumber_table(t, Interval(a, b), p, n_min, n_max, b01, oracle);
        py::list rows;
        for (const auto& r : tab.rows) {
          py::dict d;
          d["n"] = r.n;
          d["lower"] = r.lower;
          d["upper"] = r.upper;
          d["oracle"] = r.oracle ? py::cast(*r.oracle) : py::none();
          d["n2_oracle"] = r.n2_oracle ? py::cast(*r.n2_oracle) : py::none();
          rows.append(d);
        }
        return rows;
      },
      py::arg("target"), py::arg("p"), py::arg("n_min"), py::arg("n_max"), py::arg("b01"), py::arg("a") = 0.0,
      py::arg("b") = 1.0, py::arg("oracle") = std::vector<double>{});

  m.def(
      "svd_snumbers",
      [](int order, double a, double b, std::size_t nodes, std::size_t count) {
        if (order != 1 && order != 2) throw py::value_error("order must be 1 or 2");
        const auto op = volterra_matrix(static_cast<VolterraOrder>(order), make_grid(a, b, nodes), 2.0);
        return svd_snumbers(op, count).values;
      },
      py::arg("order"), py::arg("a") = 0.0, py::arg("b") = 1.0, py::arg("nodes") = 0, py::arg("count") = 0,
      "Leading singular values of T1 or T2 on L2 (the p = 2 oracle).");
  m.def(
      "clamped_snumbers",
      [](double a, double b, std::size_t nodes, std::size_t count) {
        return clamped_snumbers(volterra_matrix(VolterraOrder::T2, make_grid(a, b, nodes), 2.0), count).values;
      },
      py::arg("a") = 0.0, py::arg("b") = 1.0, py::arg("nodes") = 0, py::arg("count") = 0);
  m.def("gamma_p", &gamma_p, py::arg("p"));
  m.def(
      "t1_reference", [](double p, double a, double b, int n) { return t1_reference(p, Interval(a, b), n); },
      py::arg("p"), py::arg("a"), py::arg("b"), py::arg("n"));

  m.def(
      "check_factorization",
      [](int trials, std::uint64_t seed, std::vector<double> exponents, double a, double b, std::size_t nodes) {
        const auto r = check_factorization(make_grid(a, b, nodes), trials, seed, std::move(exponents));
        py::dict d;
        d["trials"] = r.trials;
        d["seed"] = r.seed;
        d["max_curvature_error"] = r.max_curvature_error;
        d["max_boundary_value"] = r.max_boundary_value;
        d["max_boundary_slope"] = r.max_boundary_slope;
        d["max_isometry_defect"] = r.max_isometry_defect;
        d["passed"] = r.passed();
        return d;
      },
      py::arg("trials") = 20, py::arg("seed") = 0, py::arg("exponents") = std::vector<double>{1.5, 2.0, 3.0},
      py::arg("a") = 0.0, py::arg("b") = 1.0, py::arg("nodes") = 0);
}
