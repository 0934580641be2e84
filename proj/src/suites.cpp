#include "fncr/suites.hpp"

#include <cmath>
#include <ostream>

#include "fncr/fixtures.hpp"
#include "fncr/harness.hpp"
#include "fncr/rate_checks.hpp"
#include "fncr/rng.hpp"

namespace fncr {

SpdInstance make_spd_instance(std::uint64_t seed, std::size_t d) {
  SplitMix64 rng(seed ^ 0x7f4a7c15);
  const double cond = std::pow(10.0, 6.0 * rng.uniform01());
  QuadraticProblem problem = QuadraticProblem::random_spd(seed, d, cond);
  Vec g(d);
  SplitMix64 grng(seed ^ 0x9e3779b9);
  for (double& v : g) v = grng.gaussian();
  return SpdInstance{std::move(problem), std::move(g), cond};
}

namespace {

LinearOp dense_op(const QuadraticProblem& problem) {
  return [&problem](const Vec& v) {
    Vec hv(problem.dim());
    problem.hessian_vec(Vec(problem.dim(), 0.0), v, hv);
    return hv;
  };
}

void report_line(std::ostream& out, const std::string& name, bool pass, double margin,
                 SuiteOutcome& outcome) {
  ++outcome.checks;
  if (!pass) ++outcome.failures;
  out << (pass ? "[PASS] " : "[FAIL] ") << name << " (worst margin " << margin << ")\n";
}

}  // namespace

SuiteOutcome suite_cr_properties(std::ostream& out, int n_seeds, bool check_rate) {
  SuiteOutcome outcome;
  // Worst margins aggregated across instances, one report line per check.
  CrPropertyReport worst;
  bool first = true;
  int rate_failures = 0;
  double rate_worst = std::numeric_limits<double>::infinity();

  for (int seed = 0; seed < n_seeds; ++seed) {
    const SpdInstance inst = make_spd_instance(static_cast<std::uint64_t>(seed + 1));
    const std::size_t d = inst.problem.dim();
    CrState st;
    cr_solve(dense_op(inst.problem), inst.g, 0.0, static_cast<int>(d), &st);
    const CrPropertyReport rep =
        verify_cr_properties(st, inst.problem.lambda_min(), inst.problem.lambda_max(), false);
    if (first) {
      worst = rep;
      first = false;
    } else {
      for (std::size_t i = 0; i < rep.checks.size(); ++i) {
        if (rep.checks[i].worst_margin < worst.checks[i].worst_margin)
          worst.checks[i].worst_margin = rep.checks[i].worst_margin;
        worst.checks[i].pass = worst.checks[i].pass && rep.checks[i].pass;
      }
    }

    if (check_rate) {
      // Residual rate envelope |r_t| <= 2 q^t |g| with q = (sqrt(k)-1)/(sqrt(k)+1),
      // floored at 1e-12 relative for floating-point measurement noise.
      const double sq = std::sqrt(inst.cond);
      const double q = (sq - 1.0) / (sq + 1.0);
      for (int t = 0; t <= st.t; ++t) {
        const double envelope = std::max(2.0 * std::pow(q, t), 1e-12);
        const double margin = envelope - st.rnorm_hist[static_cast<std::size_t>(t)] / st.gnorm;
        rate_worst = std::min(rate_worst, margin);
        if (margin < 0.0) {
          ++rate_failures;
          break;
        }
      }
    }
  }

  for (const auto& chk : worst.checks)
    report_line(out, "cr_properties/" + chk.name, chk.pass, chk.worst_margin, outcome);
  if (check_rate)
    report_line(out, "cr_properties/residual_rate_envelope", rate_failures == 0, rate_worst,
                outcome);
  return outcome;
}

SuiteOutcome suite_lemma_bounds(std::ostream& out, int n_seeds) {
  SuiteOutcome outcome;
  double alpha_lo_worst = std::numeric_limits<double>::infinity();
  double alpha_hi_worst = std::numeric_limits<double>::infinity();
  double tele_worst = std::numeric_limits<double>::infinity();
  bool alpha_lo_pass = true, alpha_hi_pass = true, tele_pass = true;

  for (int seed = 0; seed < n_seeds; ++seed) {
    const SpdInstance inst = make_spd_instance(static_cast<std::uint64_t>(seed + 1));
    CrState st;
    cr_solve(dense_op(inst.problem), inst.g, 0.0, static_cast<int>(inst.problem.dim()), &st);
    const CrPropertyReport rep =
        verify_cr_properties(st, inst.problem.lambda_min(), inst.problem.lambda_max(), false);
    for (const char* name : {"alpha_lower_bound", "alpha_upper_bound", "telescoping_descent"}) {
      const PropertyCheck* chk = rep.find(name);
      if (!chk) continue;
      if (std::string(name) == "alpha_lower_bound") {
        alpha_lo_worst = std::min(alpha_lo_worst, chk->worst_margin);
        alpha_lo_pass = alpha_lo_pass && chk->pass;
      } else if (std::string(name) == "alpha_upper_bound") {
        alpha_hi_worst = std::min(alpha_hi_worst, chk->worst_margin);
        alpha_hi_pass = alpha_hi_pass && chk->pass;
      } else {
        tele_worst = std::min(tele_worst, chk->worst_margin);
        tele_pass = tele_pass && chk->pass;
      }
    }
  }
  report_line(out, "lemma_bounds/alpha_lower_bound", alpha_lo_pass, alpha_lo_worst, outcome);
  report_line(out, "lemma_bounds/alpha_upper_bound", alpha_hi_pass, alpha_hi_worst, outcome);
  report_line(out, "lemma_bounds/telescoping_descent", tele_pass, tele_worst, outcome);

  // Hand-computed 2x2 fixture: H = diag(1, 2), g = (1, 1) gives
  // alpha_0 = 3/5, inside [1/lambda_max, 1/lambda_min] = [0.5, 1].
  {
    QuadraticProblem diag12({1.0, 0.0, 0.0, 2.0}, {0.0, 0.0});
    CrState st;
    cr_solve(dense_op(diag12), Vec{1.0, 1.0}, 0.0, 2, &st);
    const bool alpha_ok = std::abs(st.alpha_hist[0] - 0.6) < 1e-15 && st.alpha_hist[0] >= 0.5 &&
                          st.alpha_hist[0] <= 1.0;
    report_line(out, "lemma_bounds/diag12_alpha0", alpha_ok, st.alpha_hist[0] - 0.5, outcome);
  }
  return outcome;
}

SuiteOutcome suite_rate_checks(std::ostream& out) {
  SuiteOutcome outcome;

  // Condition-number-free linear envelope on the strongly convex fixture.
  {
    ExperimentSpec spec = fixtures::strongly_convex();
    std::unique_ptr<Problem> problem = build_problem(spec.problem);
    const Vec x0 = init_x0(problem->dim(), spec.seed, spec.x0_scheme);
    const ProblemInfo info = estimate_problem_info(*problem, x0);

    SolverConfig cfg = spec.config;
    cfg.omega = std::sqrt(1.0 / (2.0 * info.kappa_est));
    cfg.T = static_cast<int>(std::ceil(std::sqrt(info.kappa_est) * std::log(8.0 * info.kappa_est) / 4.0));
    cfg.T_max = std::max(cfg.T, cfg.T_max);

    Oracle oracle(*problem);
    const SolveResult res = fncr_ls(oracle, x0, cfg, fixtures::kStronglyConvexFStar);
    const RateCheckReport rep = rate_checks(res, info, cfg, problem->dim(), 0.05);
    const RateCheckEntry* entry = rep.find("condition_free_linear_envelope");
    const bool pass = res.status == SolveStatus::Converged && entry && entry->applicable &&
                      entry->pass && entry->n_checked > 0;
    report_line(out, "rate_checks/condition_free_linear_envelope", pass,
                entry ? entry->worst_margin : -1.0, outcome);
  }

  // Local quadratic phase on the same fixture with rho in (1/3, 1/2).
  {
    ExperimentSpec spec = fixtures::strongly_convex();
    std::unique_ptr<Problem> problem = build_problem(spec.problem);
    const Vec x0 = init_x0(problem->dim(), spec.seed, spec.x0_scheme);
    const ProblemInfo info = estimate_problem_info(*problem, x0);

    SolverConfig cfg = spec.config;
    cfg.rho = 0.35;
    cfg.omega = 0.0;
    cfg.T = cfg.T_max = static_cast<int>(problem->dim());

    Oracle oracle(*problem);
    const SolveResult res = fncr_ls(oracle, x0, cfg);
    const RateCheckReport rep = rate_checks(res, info, cfg, problem->dim(), 0.10);
    const RateCheckEntry* entry = rep.find("local_quadratic_phase");
    const bool pass = res.status == SolveStatus::Converged && entry && entry->applicable &&
                      entry->pass && entry->n_checked > 0;
    report_line(out, "rate_checks/local_quadratic_phase", pass, entry ? entry->worst_margin : -1.0,
                outcome);
  }

  // Regularized no-backtracking regime on the over-parameterized fixture.
  {
    ExperimentSpec spec = fixtures::overparameterized();
    std::unique_ptr<Problem> problem = build_problem(spec.problem);
    const Vec x0 = init_x0(problem->dim(), spec.seed, spec.x0_scheme);
    ProblemInfo info = estimate_problem_info(*problem, x0);

    SolverConfig cfg = spec.config;
    cfg.rho = 1.0 / 6.0;
    cfg.omega = 0.0;
    cfg.sigma = std::sqrt(info.lh_est / 2.0);
    cfg.T = cfg.T_max = static_cast<int>(std::min<std::size_t>(problem->dim(), 400));
    cfg.oracle_budget = 100000000;

    Oracle oracle(*problem);
    const SolveResult res = fncr_ls(oracle, x0, cfg);
    const RateCheckReport rep = rate_checks(res, info, cfg, problem->dim(), 0.10);
    const RateCheckEntry* entry = rep.find("regularized_no_backtracking");
    const bool pass = res.status == SolveStatus::Converged && entry && entry->applicable &&
                      entry->pass && entry->n_checked > 0;
    report_line(out, "rate_checks/regularized_no_backtracking", pass,
                entry ? entry->worst_margin : -1.0, outcome);
  }

  return outcome;
}

}  // namespace fncr
