#pragma once

#include <cstdint>

namespace fncr {

/// Framework hyperparameters shared by the inner solver, line search, and
/// outer loops. Defaults follow the benchmark protocol: rho = 0.01, omega = 0,
/// T = 5, T_max = 1000, zeta = 0.5, ls_rho = 1e-4, grad_tol = 1e-6, budget of
/// 1e5 oracle units. sigma > 0 switches fncr_ls to its gradient-regularized
/// variant. T and T_max are clamped to the problem dimension when a solve
/// starts (the inner solver never benefits from more steps than dimensions).
struct SolverConfig {
  double rho = 0.01;    // inner sufficiency parameter, in (0, 1/2)
  double omega = 0.0;   // inner relative-residual exit, in [0, 1)
  int T = 5;            // sufficient-iteration threshold, >= 1
  int T_max = 1000;     // inner iteration cap, >= T
  double zeta = 0.5;    // backtracking shrink factor, in (0, 1)
  double eta0 = 1.0;    // initial line-search step, > 0
  double sigma = 0.0;   // gradient-regularization strength, >= 0
  double theta = 0.0;   // > 0 schedules T_k = ceil(theta / min(1, sqrt(|g_k|)))
  double grad_tol = 1e-6;
  std::int64_t oracle_budget = 100000;  // in oracle units
  int max_outer = 100000;               // safety cap on outer iterations
  int check_window = 20;                // sufficiency checkpoint spacing, >= 1
  double ls_rho = 1e-4;                 // line-search sufficiency parameter, in (0, 1/2)

  // Opt-in per-iteration schedule for the superlinear regime: omega_k =
  // min(omega, |g_k|) and T_k = ceil(sqrt(kappa_hint) ln(2/min(1,|g_k|))/4),
  // clamped to [1, T_max]. Requires a condition-number hint (estimate it at
  // x0); diagnostic, not part of any acceptance gate.
  bool superlinear_schedule = false;
  double kappa_hint = 0.0;  // > 0 required when the schedule is enabled

  /// Throws ConfigError with a descriptive message on any range violation.
  void validate() const;
};

}  // namespace fncr
