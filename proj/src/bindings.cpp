#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>

#include "fncr/fixtures.hpp"
#include "fncr/harness.hpp"
#include "fncr/rate_checks.hpp"

namespace py = pybind11;
using namespace fncr;

namespace {

SolverConfig config_from_kwargs(const py::kwargs& kwargs) {
  SolverConfig cfg;
  for (auto item : kwargs) {
    const std::string key = py::cast<std::string>(item.first);
    if (key == "rho") cfg.rho = py::cast<double>(item.second);
    else if (key == "omega") cfg.omega = py::cast<double>(item.second);
    else if (key == "T") cfg.T = py::cast<int>(item.second);
    else if (key == "T_max") cfg.T_max = py::cast<int>(item.second);
    else if (key == "zeta") cfg.zeta = py::cast<double>(item.second);
    else if (key == "eta0") cfg.eta0 = py::cast<double>(item.second);
    else if (key == "sigma") cfg.sigma = py::cast<double>(item.second);
    else if (key == "theta") cfg.theta = py::cast<double>(item.second);
    else if (key == "grad_tol") cfg.grad_tol = py::cast<double>(item.second);
    else if (key == "oracle_budget") cfg.oracle_budget = py::cast<std::int64_t>(item.second);
    else if (key == "max_outer") cfg.max_outer = py::cast<int>(item.second);
    else if (key == "check_window") cfg.check_window = py::cast<int>(item.second);
    else if (key == "ls_rho") cfg.ls_rho = py::cast<double>(item.second);
    else throw ConfigError("unknown config key '" + key + "'");
  }
  cfg.validate();
  return cfg;
}

py::dict result_to_dict(const SolveResult& res) {
  py::dict d;
  d["status"] = std::string(to_string(res.status));
  d["f_final"] = res.f_final;
  d["gnorm_final"] = res.gnorm_final;
  d["iterations"] = res.iterations;
  d["ins_count"] = res.ins_count;
  d["units"] = res.units_final;
  d["x"] = res.x;
  py::list trace;
  for (const auto& rec : res.trace) {
    py::dict row;
    row["k"] = rec.k;
    row["f"] = rec.f;
    row["gnorm"] = rec.gnorm;
    if (rec.delta) row["delta"] = *rec.delta;
    row["oracle_units"] = rec.oracle_units;
    row["wall_ns"] = rec.wall_ns;
    row["dtype"] = rec.dtype ? std::string(to_string(*rec.dtype)) : std::string("n/a");
    row["eta"] = rec.eta;
    row["inner_t"] = rec.inner_t;
    row["ls_backtracks"] = rec.ls_backtracks;
    trace.append(row);
  }
  d["trace"] = trace;
  return d;
}

template <typename Solver>
py::dict run_solver(const Solver& solver, const Problem& problem, const Vec& x0,
                    const py::kwargs& kwargs) {
  Oracle oracle(problem);
  const SolveResult res = solver(oracle, x0, config_from_kwargs(kwargs));
  py::dict d = result_to_dict(res);
  py::dict counts;
  counts["f_evals"] = oracle.counter().f_evals;
  counts["grad_evals"] = oracle.counter().grad_evals;
  counts["hvp_evals"] = oracle.counter().hvp_evals;
  d["counter"] = counts;
  return d;
}

}  // namespace

PYBIND11_MODULE(_fncr, m) {
  m.doc() = "Faithful-Newton conjugate-residual solvers (C++ core)";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  py::class_<Dataset>(m, "Dataset")
      .def_readonly("n_samples", &Dataset::n_samples)
      .def_readonly("n_features", &Dataset::n_features)
      .def_readonly("n_classes", &Dataset::n_classes)
      .def_readonly("features", &Dataset::features)
      .def_readonly("labels", &Dataset::labels);

  m.def("make_synthetic", &make_synthetic, py::arg("seed"), py::arg("n"), py::arg("d"),
        py::arg("c"), py::arg("separation") = 1.0);
  m.def("load_libsvm", &load_libsvm, py::arg("path"));
  m.def("load_csv", &load_csv, py::arg("path"));
  m.def("dataset_checksum", &dataset_checksum, py::arg("dataset"));

  py::class_<Problem, std::shared_ptr<Problem>>(m, "Problem")
      .def("dim", &Problem::dim)
      .def("value", &Problem::value)
      .def("gradient",
           [](const Problem& p, const Vec& x) {
             Vec g(p.dim());
             p.gradient(x, g);
             return g;
           })
      .def("hessian_vec", [](const Problem& p, const Vec& x, const Vec& v) {
        Vec hv(p.dim());
        p.hessian_vec(x, v, hv);
        return hv;
      });

  py::class_<QuadraticProblem, Problem, std::shared_ptr<QuadraticProblem>>(m, "QuadraticProblem")
      .def(py::init<std::vector<double>, Vec>(), py::arg("a_row_major"), py::arg("b"))
      .def_static("random_spd", &QuadraticProblem::random_spd, py::arg("seed"), py::arg("d"),
                  py::arg("cond"))
      .def_property_readonly("known_solution", &QuadraticProblem::known_solution)
      .def_property_readonly("lambda_min", &QuadraticProblem::lambda_min)
      .def_property_readonly("lambda_max", &QuadraticProblem::lambda_max)
      .def("optimal_value", &QuadraticProblem::optimal_value);

  py::class_<CrossEntropyProblem, Problem, std::shared_ptr<CrossEntropyProblem>>(
      m, "CrossEntropyProblem")
      .def(py::init<Dataset, double>(), py::arg("data"), py::arg("mu"))
      .def_property_readonly("mu", &CrossEntropyProblem::mu);

  m.def(
      "fncr_ls",
      [](const Problem& p, const Vec& x0, const py::kwargs& kw) {
        return run_solver(
            [](Oracle& o, const Vec& x, const SolverConfig& c) { return fncr_ls(o, x, c); }, p, x0,
            kw);
      },
      py::arg("problem"), py::arg("x0"));
  m.def(
      "newton_cg_ls",
      [](const Problem& p, const Vec& x0, const py::kwargs& kw) {
        return run_solver(
            [](Oracle& o, const Vec& x, const SolverConfig& c) { return newton_cg_ls(o, x, c); },
            p, x0, kw);
      },
      py::arg("problem"), py::arg("x0"));
  m.def(
      "gd_ls",
      [](const Problem& p, const Vec& x0, const py::kwargs& kw) {
        return run_solver(
            [](Oracle& o, const Vec& x, const SolverConfig& c) { return gd_ls(o, x, c); }, p, x0,
            kw);
      },
      py::arg("problem"), py::arg("x0"));

  m.def(
      "estimate_spectrum",
      [](const Problem& p, const Vec& x) {
        Oracle oracle(p);
        const SpectrumEstimate est = estimate_spectrum(oracle, x);
        py::dict d;
        d["mu_est"] = est.mu_est;
        d["lmax_est"] = est.lmax_est;
        d["converged"] = est.converged;
        return d;
      },
      py::arg("problem"), py::arg("x"));
  m.def(
      "estimate_lh",
      [](const Problem& p, const Vec& center, double radius) {
        Oracle oracle(p);
        return estimate_lh(oracle, center, radius);
      },
      py::arg("problem"), py::arg("center"), py::arg("radius") = 1.0);

  m.def("init_x0", &init_x0, py::arg("dim"), py::arg("seed"), py::arg("scheme"));
  py::enum_<X0Scheme>(m, "X0Scheme")
      .value("Uniform01", X0Scheme::Uniform01)
      .value("Zeros", X0Scheme::Zeros);

  m.def(
      "run_experiment",
      [](const std::string& config_path, const std::vector<std::string>& overrides) {
        const ExperimentSpec spec = parse_config(config_path, overrides);
        const ExperimentResult res = run_experiment(spec);
        py::dict d = result_to_dict(res.solve);
        d["summary"] = res.summary;
        d["exit_code"] = res.exit_code;
        return d;
      },
      py::arg("config_path") = std::string(),
      py::arg("overrides") = std::vector<std::string>());
  m.def(
      "compute_f_star",
      [](const std::vector<std::string>& overrides) {
        return compute_f_star(parse_config(overrides));
      },
      py::arg("overrides"));
}
