#include "fncr/rate_checks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fncr {

const RateCheckEntry* RateCheckReport::find(const std::string& name) const {
  for (const auto& e : entries)
    if (e.name == name) return &e;
  return nullptr;
}

namespace {

RateCheckEntry check_linear_envelope(const SolveResult& result, const ProblemInfo& info,
                                     const SolverConfig& cfg, std::size_t dim, double slack) {
  RateCheckEntry e;
  e.name = "condition_free_linear_envelope";
  e.worst_margin = std::numeric_limits<double>::infinity();

  const double kappa = info.kappa_est;
  if (!(kappa > 0.0) || !std::isfinite(kappa)) {
    e.note = "no usable condition-number estimate";
    return e;
  }
  const double omega_req = std::sqrt(1.0 / (2.0 * kappa));
  const double t_req =
      std::min(std::ceil(std::sqrt(kappa) * std::log(8.0 * kappa) / 4.0), static_cast<double>(dim));
  if (cfg.omega > omega_req * (1.0 + 1e-12) || cfg.T < static_cast<int>(t_req)) {
    e.note = "parameterization outside the envelope regime";
    return e;
  }
  if (result.trace.empty() || !result.trace.front().delta) {
    e.note = "no suboptimality data (delta column missing)";
    return e;
  }

  e.applicable = true;
  const double delta0 = *result.trace.front().delta;
  const double base = 1.0 + cfg.rho;
  for (const auto& rec : result.trace) {
    if (!rec.delta) continue;
    const double bound = (1.0 + slack) * delta0 / std::pow(base, 0.5 * rec.k);
    const double margin = bound - *rec.delta;
    e.worst_margin = std::min(e.worst_margin, margin);
    if (margin < 0.0) e.pass = false;
    ++e.n_checked;
  }
  return e;
}

RateCheckEntry check_quadratic_phase(const SolveResult& result, const ProblemInfo& info,
                                     const SolverConfig& cfg, double slack) {
  RateCheckEntry e;
  e.name = "local_quadratic_phase";
  e.worst_margin = std::numeric_limits<double>::infinity();

  if (!(info.mu_est > 0.0) || !(info.lh_est > 0.0)) {
    e.note = "needs positive curvature and Lipschitz estimates";
    return e;
  }
  // Conservative entry radius: shrink the estimates against their slack so
  // only points safely inside the phase are tested.
  const double mu_lo = info.mu_est * (1.0 - slack);
  const double lh_hi = info.lh_est * (1.0 + slack);
  const double radius = local_radius(mu_lo, lh_hi, cfg.rho);
  const double factor = (1.0 + slack) * info.lh_est / (info.mu_est * info.mu_est);

  e.applicable = true;
  for (std::size_t i = 0; i + 1 < result.trace.size(); ++i) {
    const double gk = result.trace[i].gnorm;
    if (gk > radius) continue;
    const double gk1 = result.trace[i + 1].gnorm;
    const double margin = factor * gk * gk - gk1;
    e.worst_margin = std::min(e.worst_margin, margin);
    if (margin < 0.0) e.pass = false;
    ++e.n_checked;
  }
  // The step out of the last recorded iterate lands at the final state.
  if (!result.trace.empty() && result.status == SolveStatus::Converged) {
    const double gk = result.trace.back().gnorm;
    if (gk <= radius) {
      const double margin = factor * gk * gk - result.gnorm_final;
      e.worst_margin = std::min(e.worst_margin, margin);
      if (margin < 0.0) e.pass = false;
      ++e.n_checked;
    }
  }
  if (e.n_checked == 0) e.note = "no iterate entered the quadratic-phase region";
  return e;
}

RateCheckEntry check_no_backtracking(const SolveResult& result, const ProblemInfo& info,
                                     const SolverConfig& cfg, std::size_t dim, double slack) {
  RateCheckEntry e;
  e.name = "regularized_no_backtracking";
  e.worst_margin = std::numeric_limits<double>::infinity();

  if (!(info.lh_est > 0.0)) {
    e.note = "needs a positive Lipschitz estimate";
    return e;
  }
  const double sigma_req = std::sqrt(info.lh_est / 2.0);
  const bool sigma_ok = std::abs(cfg.sigma - sigma_req) <= slack * sigma_req;
  const int dim_cap = static_cast<int>(dim);
  const bool t_ok = std::min(cfg.T, dim_cap) == std::min(cfg.T_max, dim_cap);
  if (!sigma_ok || cfg.rho > 1.0 / 6.0 + 1e-12 || cfg.omega != 0.0 || !t_ok) {
    e.note = "parameterization outside the no-backtracking regime";
    return e;
  }

  e.applicable = true;
  const double coef = (1.0 - slack) * 2.0 * cfg.rho / std::sqrt(2.0 * info.lh_est);
  auto transition = [&](const TraceRecord& rec, double f_next) {
    if (rec.ls_backtracks != 0) {
      e.pass = false;
      e.note = "backtracking occurred at iteration " + std::to_string(rec.k);
    }
    const double required_drop = coef * std::pow(rec.gnorm, 1.5);
    const double margin = (rec.f - f_next) - required_drop;
    e.worst_margin = std::min(e.worst_margin, margin);
    if (margin <= 0.0) e.pass = false;
    ++e.n_checked;
  };
  for (std::size_t i = 0; i + 1 < result.trace.size(); ++i)
    transition(result.trace[i], result.trace[i + 1].f);
  if (!result.trace.empty()) transition(result.trace.back(), result.f_final);
  return e;
}

}  // namespace

RateCheckReport rate_checks(const SolveResult& result, const ProblemInfo& info,
                            const SolverConfig& cfg, std::size_t problem_dim, double slack) {
  RateCheckReport report;
  report.entries.push_back(check_linear_envelope(result, info, cfg, problem_dim, slack));
  report.entries.push_back(check_quadratic_phase(result, info, cfg, slack));
  report.entries.push_back(check_no_backtracking(result, info, cfg, problem_dim, slack));
  return report;
}

}  // namespace fncr
