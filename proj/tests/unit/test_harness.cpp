#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "fncr/fixtures.hpp"
#include "fncr/harness.hpp"

using namespace fncr;

TEST_CASE("defaults follow the benchmark protocol") {
  const ExperimentSpec spec = parse_config({"problem=cross_entropy", "solver=fncr_ls"});
  CHECK(spec.config.rho == 0.01);
  CHECK(spec.config.omega == 0.0);
  CHECK(spec.config.T == 5);
  CHECK(spec.config.T_max == 1000);
  CHECK(spec.config.zeta == 0.5);
  CHECK(spec.config.ls_rho == 1e-4);
  CHECK(spec.config.grad_tol == 1e-6);
  CHECK(spec.config.oracle_budget == 100000);
  CHECK(spec.config.sigma == 0.0);
  CHECK(spec.config.eta0 == 1.0);
}

TEST_CASE("solver-dependent defaults") {
  CHECK(parse_config({"problem=cross_entropy", "solver=fncr_reg_ls"}).config.sigma == 0.01);
  CHECK(parse_config({"problem=cross_entropy", "solver=newton_cg"}).config.omega == 0.1);
  CHECK(parse_config({"problem=cross_entropy", "solver=gd"}).config.eta0 == 0.01);
  // Explicit settings win over the solver default.
  CHECK(parse_config({"problem=cross_entropy", "solver=gd", "eta0=1.0"}).config.eta0 == 1.0);
  CHECK(parse_config({"problem=cross_entropy", "solver=fncr_reg_ls", "sigma=0.5"}).config.sigma ==
        0.5);
}

TEST_CASE("config errors: range, unknown key, missing problem") {
  CHECK_THROWS_AS(parse_config({"problem=cross_entropy", "rho=0.7"}), ConfigError);
  CHECK_THROWS_AS(parse_config({"problem=cross_entropy", "no_such_key=1"}), ConfigError);
  CHECK_THROWS_AS(parse_config({"solver=gd"}), ConfigError);
  CHECK_THROWS_AS(parse_config({"problem=banana"}), ConfigError);
  CHECK_THROWS_AS(parse_config({"problem=cross_entropy", "T=abc"}), ConfigError);
}

TEST_CASE("config file parsing with comments and flag overrides") {
  const std::string path = "fncr_test_config.txt";
  {
    std::ofstream out(path);
    out << "# benchmark fixture\n";
    out << "problem = cross_entropy\n";
    out << "mu = 0.1   # ridge\n";
    out << "rho=0.02\n";
  }
  const ExperimentSpec spec = parse_config(path, {"rho=0.03"});
  CHECK(spec.problem.mu == 0.1);
  CHECK(spec.config.rho == 0.03);  // flag beats file
  std::remove(path.c_str());
}

TEST_CASE("initial iterates are deterministic and in range") {
  const Vec zeros = init_x0(5, 7, X0Scheme::Zeros);
  CHECK(zeros == Vec(5, 0.0));
  const Vec a = init_x0(64, 7, X0Scheme::Uniform01);
  const Vec b = init_x0(64, 7, X0Scheme::Uniform01);
  CHECK(a == b);
  for (double v : a) {
    CHECK(v >= 0.0);
    CHECK(v < 1.0);
  }
  CHECK(a != init_x0(64, 8, X0Scheme::Uniform01));
}

TEST_CASE("trace CSV schema and exact round trip") {
  std::vector<TraceRecord> trace(2);
  trace[0].k = 0;
  trace[0].f = 1.0 / 3.0;
  trace[0].gnorm = std::sqrt(2.0);
  trace[0].delta = 1e-17;
  trace[0].oracle_units = 42;
  trace[0].wall_ns = 123456789;
  trace[0].dtype = DirectionType::Ins;
  trace[0].eta = 0.0078125;
  trace[0].inner_t = 5;
  trace[0].ls_backtracks = 7;
  trace[1].k = 1;
  trace[1].f = 0.25;
  trace[1].gnorm = 1e-300;
  trace[1].oracle_units = 50;
  trace[1].wall_ns = 223456789;
  trace[1].eta = 1.0;

  const std::string csv = trace_to_csv(trace);
  std::istringstream lines(csv);
  std::string header;
  std::getline(lines, header);
  CHECK(header == "k,f,gnorm,delta,oracle_units,wall_ns,dtype,eta,inner_t,ls_backtracks");

  const std::vector<TraceRecord> back = parse_trace_csv(csv);
  REQUIRE(back.size() == 2);
  CHECK(back[0].f == trace[0].f);
  CHECK(back[0].gnorm == trace[0].gnorm);
  CHECK(back[0].delta == trace[0].delta);
  CHECK(back[0].eta == trace[0].eta);
  CHECK(back[0].dtype == DirectionType::Ins);
  CHECK_FALSE(back[1].delta.has_value());
  CHECK_FALSE(back[1].dtype.has_value());
  CHECK(back[1].gnorm == 1e-300);
  CHECK(trace_to_csv(back) == csv);
}

TEST_CASE("a one-iteration quadratic run emits header plus one row") {
  ExperimentSpec spec = parse_config({"problem=quadratic", "quad_seed=3", "quad_d=6",
                                      "quad_cond=10", "omega=0", "T=6", "T_max=6",
                                      "grad_tol=1e-7", "x0=zeros"});
  spec.output_path.clear();
  const ExperimentResult res = run_experiment(spec);
  CHECK(res.solve.status == SolveStatus::Converged);
  CHECK(res.exit_code == 0);
  REQUIRE(res.solve.trace.size() == 1);
  const std::string csv = trace_to_csv(res.solve.trace);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);
}

TEST_CASE("budget setting propagates to the exit code") {
  ExperimentSpec spec = parse_config(
      {"problem=cross_entropy", "solver=gd", "oracle_budget=10", "synth_n=50", "synth_d=4"});
  spec.output_path.clear();
  const ExperimentResult res = run_experiment(spec);
  CHECK(res.solve.status == SolveStatus::BudgetExhausted);
  CHECK(res.exit_code == 2);
}

TEST_CASE("summary counts INS rows") {
  ExperimentSpec spec = fixtures::strongly_convex();
  spec.config.rho = 0.45;  // provoke insufficiency
  spec.config.max_outer = 30;
  const ExperimentResult res = run_experiment(spec);
  int ins = 0;
  for (const auto& rec : res.solve.trace)
    if (rec.dtype == DirectionType::Ins) ++ins;
  CHECK(res.solve.ins_count == ins);
  CHECK(res.summary.find("ins=" + std::to_string(ins)) != std::string::npos);
}

TEST_CASE("repeated runs are byte-identical modulo the wall clock") {
  ExperimentSpec spec = fixtures::strongly_convex();
  spec.config.max_outer = 10;
  const ExperimentResult a = run_experiment(spec);
  const ExperimentResult b = run_experiment(spec);
  const std::string csv_a = trace_to_csv(a.solve.trace);
  const std::string csv_b = trace_to_csv(b.solve.trace);
  CHECK(traces_equal_modulo_wall(csv_a, csv_b));
}

TEST_CASE("reference optimum of a quadratic matches the analytic minimum") {
  ExperimentSpec spec =
      parse_config({"problem=quadratic", "quad_seed=5", "quad_d=8", "quad_cond=100"});
  spec.output_path.clear();
  const double f_star = compute_f_star(spec);
  QuadraticProblem q = QuadraticProblem::random_spd(5, 8, 100.0);
  CHECK(f_star == doctest::Approx(q.optimal_value()).epsilon(1e-12));
}

TEST_CASE("reference optimum of a flat-ridge problem comes from the relaxed tight run") {
  // mu = 0 is convex but not strongly convex: the reference run regularizes
  // the inner operator and relaxes the gradient tolerance to 1e-9.
  ExperimentSpec spec = parse_config({"problem=cross_entropy", "mu=0", "synth_n=20",
                                      "synth_d=50", "synth_c=2", "synth_seed=3"});
  spec.output_path.clear();
  const double f_star = compute_f_star(spec);
  CHECK(std::isfinite(f_star));
  CHECK(f_star >= 0.0);          // cross-entropy is nonnegative
  CHECK(f_star <= 20.0 * 0.7);   // and below the uniform-prediction value N ln 2
}

TEST_CASE("unknown suite names are rejected") {
  std::ostringstream sink;
  CHECK_THROWS_AS(run_suite("bogus", sink), ConfigError);
}
