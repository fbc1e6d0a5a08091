#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "contest_forge/compstat.hpp"
#include "contest_forge/contest.hpp"
#include "contest_forge/error.hpp"
#include "contest_forge/heterogeneous.hpp"
#include "contest_forge/homogeneous.hpp"
#include "contest_forge/io.hpp"

namespace py = pybind11;
namespace cf = contest_forge;

namespace {

cf::EmpiricalTypes make_types(const std::vector<std::tuple<double, double, double>>& points,
                              std::size_t n) {
  std::vector<cf::TypePoint> pts;
  for (const auto& [q, c, w] : points) pts.push_back({q, c, w});
  return cf::EmpiricalTypes(std::move(pts), n);
}

py::dict estimate_dict(const cf::ObjectiveEstimate& e) {
  py::dict d;
  d["mean"] = e.mean;
  d["std_error"] = e.std_error;
  d["replicas"] = e.replicas;
  d["seed"] = e.seed;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Rank-order contest design and equilibrium computation";

  static py::exception<cf::ContestError> contest_error(m, "ContestError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const cf::ContestError& e) {
      py::set_error(contest_error, e.what());
    }
  });

  py::class_<cf::PrizeVector>(m, "PrizeVector")
      .def(py::init([](std::vector<double> values, double budget) {
             return cf::validate_contest(std::move(values), budget);
           }),
           py::arg("values"), py::arg("budget"))
      .def_property_readonly("values", &cf::PrizeVector::values)
      .def_property_readonly("budget", &cf::PrizeVector::budget)
      .def_property_readonly("n", &cf::PrizeVector::n)
      .def("expected_prize", [](const cf::PrizeVector& c, double p) {
        return cf::expected_prize(c, p);
      })
      .def("__repr__", [](const cf::PrizeVector& c) {
        return "PrizeVector(n=" + std::to_string(c.n()) + ")";
      });

  m.def("simple_contest", &cf::make_simple_contest, py::arg("j"), py::arg("budget"),
        py::arg("n"));
  m.def("winner_take_all", &cf::winner_take_all, py::arg("budget"), py::arg("n"));
  m.def("w_transform", [](const cf::PrizeVector& c) { return cf::w_transform(c).weights; });
  m.def("lottery_decomposition",
        [](const cf::PrizeVector& c) { return cf::lottery_decomposition(c).probabilities; });

  m.def("participation_rate", [](const cf::PrizeVector& c, double cost) {
    return cf::participation_rate(c, cost).p;
  });
  m.def("optimal_prize_count", &cf::optimal_prize_count, py::arg("n"), py::arg("p"));
  m.def("c_star", &cf::c_star, py::arg("n"), py::arg("budget"), py::arg("p"));
  m.def(
      "optimal_contest",
      [](std::size_t n, double budget, double cost) {
        const auto r = cf::optimal_contest(n, budget, cost);
        py::dict d;
        d["j_star"] = r.j_star;
        d["prizes"] = r.contest.values();
        d["p_star"] = r.equilibrium.p;
        d["lambda"] = r.equilibrium.lambda;
        d["theta"] = r.equilibrium.theta;
        return d;
      },
      py::arg("n"), py::arg("budget"), py::arg("cost"));

  m.def(
      "breakpoints",
      [](std::size_t n, double budget) {
        std::vector<std::tuple<std::size_t, double, double>> rows;
        for (const auto& e : cf::breakpoints(n, budget).entries) rows.emplace_back(e.j, e.p, e.cost);
        return rows;
      },
      py::arg("n"), py::arg("budget"));
  m.def("wta_threshold_cost", &cf::wta_threshold_cost, py::arg("n"), py::arg("budget"));
  m.def(
      "poisson_limit",
      [](double budget, double cost) {
        const auto r = cf::poisson_limit(budget, cost);
        return py::make_tuple(r.lambda_star, r.j_star);
      },
      py::arg("budget"), py::arg("cost"));

  m.def(
      "equilibrium",
      [](const cf::PrizeVector& contest,
         const std::vector<std::tuple<double, double, double>>& points) {
        const auto types = make_types(points, contest.n());
        const auto eq = cf::equilibrium(contest, types);
        py::dict d;
        d["converged"] = eq.converged;
        d["iterations"] = eq.iterations;
        d["lower"] = eq.lower.mask;
        d["upper"] = eq.upper.mask;
        d["expected_max"] = cf::exact_expected_max(types, eq.selected());
        return d;
      },
      py::arg("contest"), py::arg("points"));

  m.def(
      "wta_approx_experiment",
      [](const std::vector<std::tuple<double, double, double>>& points, std::size_t n,
         double budget, std::size_t replicas, std::uint64_t seed) {
        const auto r = cf::wta_approx_experiment(make_types(points, n), budget, replicas, seed);
        py::dict d;
        d["wta"] = estimate_dict(r.wta.estimate);
        d["best_j"] = r.best_j;
        d["best"] = r.best;
        d["ratio"] = r.ratio;
        d["three_approx"] = r.three_approx;
        return d;
      },
      py::arg("points"), py::arg("n"), py::arg("budget"), py::arg("replicas") = 1000,
      py::arg("seed") = 0);

  m.def(
      "example_obj",
      [](double budget, std::size_t n, double eps, std::uint64_t seed, std::size_t replicas) {
        return cf::io::dump(cf::io::to_json(cf::example_obj(budget, n, eps, seed, replicas)));
      },
      py::arg("budget") = 400.0, py::arg("n") = 4000, py::arg("eps") = 0.01,
      py::arg("seed") = 0, py::arg("replicas") = 200);
}
