#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fncr/config.hpp"
#include "fncr/inner.hpp"
#include "fncr/oracle.hpp"

namespace fncr {

enum class SolveStatus {
  Converged,        // |g| <= grad_tol
  BudgetExhausted,  // oracle units exceeded the budget
  MaxOuterReached,  // safety cap on outer iterations
  LineSearchFailed,
  SolverError,  // operator breakdown, non-finite iterate, ...
};

const char* to_string(SolveStatus s);

/// One outer iteration's metrics. A record describes the state at the start
/// of iteration k (f, |g|, delta) together with the step taken from it
/// (direction type, step size, inner iterations, backtracks) and the
/// cumulative cost after that step completed. f is strictly decreasing and
/// oracle_units strictly increasing across records. dtype is empty for
/// solvers without a typed inner direction (gd_ls, newton_cg_ls).
struct TraceRecord {
  int k = 0;
  double f = 0.0;
  double gnorm = 0.0;
  std::optional<double> delta;  // f - f_star_ref when a reference is known
  std::int64_t oracle_units = 0;
  std::int64_t wall_ns = 0;
  std::optional<DirectionType> dtype;
  double eta = 0.0;
  int inner_t = 0;
  int ls_backtracks = 0;
  double gs = 0.0;  // <g_k, s_k> of the proposed direction; not serialized
};

struct SolveResult {
  Vec x;
  std::vector<TraceRecord> trace;
  SolveStatus status = SolveStatus::Converged;
  std::string message;
  double f_final = 0.0;
  double gnorm_final = 0.0;  // last gradient norm evaluated
  int iterations = 0;
  int ins_count = 0;
  std::int64_t units_final = 0;
};

/// Faithful-Newton outer loop: per iteration one gradient evaluation, an
/// inner fn_cr_solve against the (optionally gradient-regularized) Hessian,
/// and a backtracking line search that every direction is routed through —
/// directions that are already sufficient accept eta = 1 at the cost of one
/// confirming f value, which the inner solver's cached trial usually already
/// paid. cfg.sigma = 0 runs the plain variant, sigma > 0 the
/// gradient-regularized one. Solver errors abort with the trace so far
/// (status = SolverError / LineSearchFailed).
SolveResult fncr_ls(Oracle& oracle, Vec x0, const SolverConfig& cfg,
                    std::optional<double> f_star = std::nullopt);

/// Inexact-Newton baseline: conjugate-gradient inner solve to
/// |r| <= omega |g| capped at T_max, then the same backtracking line search.
/// Requires a positive definite Hessian (use mu > 0 on the data problems); a
/// negative-curvature encounter raises OperatorNotPdError.
SolveResult newton_cg_ls(Oracle& oracle, Vec x0, const SolverConfig& cfg,
                         std::optional<double> f_star = std::nullopt);

/// Gradient descent with the same line search, trying eta0 first
/// (benchmark default 0.01 for this solver).
SolveResult gd_ls(Oracle& oracle, Vec x0, const SolverConfig& cfg,
                  std::optional<double> f_star = std::nullopt);

/// Radius of the quadratic-phase region, 3(1 - 2 rho) mu^2 / L_H: once
/// |g| falls below it (with rho in the (1/3, 1/2) regime), gradient norms
/// square each iteration. Returns +inf when L_H = 0.
double local_radius(double mu, double lh, double rho);

}  // namespace fncr
