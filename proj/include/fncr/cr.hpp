#pragma once

#include <functional>
#include <string>
#include <vector>

#include "fncr/vec.hpp"

namespace fncr {

using LinearOp = std::function<Vec(const Vec&)>;

/// Relative residual treated as an exact zero. At the grade the residual is
/// exactly zero in exact arithmetic and the |r| <= tol |g| exit fires for any
/// tol >= 0; in doubles the computed residual bottoms out near machine
/// precision instead, so termination tests compare against
/// max(tol, kResidualZeroRel) * |g|. Well below every tolerance any caller
/// here certifies (the tightest is 1e-9).
inline constexpr double kResidualZeroRel = 1e-14;

/// Conjugate-residual iterate bundle. Beyond the working vectors, every step
/// records the scalar diagnostics the solver's invariants are stated in, so a
/// finished state can be audited without re-running products.
///
/// Invariants maintained on a positive definite operator, for t up to the
/// grade of g: the residual norms decrease strictly; |s| and |Hs| increase
/// strictly with |Hs| <= |g|; <g, s> decreases strictly and is negative;
/// |Hp| <= |Hr|; <g, s> <= -<s, Hs> < 0; <s, Hr> = 0. verify_cr_properties
/// checks all of these with explicit tolerances.
struct CrState {
  int t = 0;
  Vec s;   // current solution estimate
  Vec r;   // residual -g - H s, maintained by recurrence
  Vec p;   // search direction
  Vec hp;  // H p, maintained by recurrence (no extra product)
  Vec hr;  // H r, one product per step
  double rhr = 0.0;  // <r, Hr>
  Vec g;             // copy of the right-hand side's negative, for auditing
  double gnorm = 0.0;

  // Scalar histories indexed by iteration (entry 0 is the initial state;
  // alpha/gamma entry t belongs to the step from t to t+1).
  std::vector<double> alpha_hist, gamma_hist;
  std::vector<double> rnorm_hist, snorm_hist, hsnorm_hist;
  std::vector<double> gs_hist, shs_hist, shr_hist;
  std::vector<double> hpnorm_hist, hrnorm_hist;

  double rnorm() const { return rnorm_hist.back(); }
  double gs() const { return gs_hist.back(); }

  /// |r - (-g - Hs)| / |g|, recomputed with one extra product. Off the hot
  /// path; tests use it to confirm the residual recurrence.
  double residual_recurrence_error(const LinearOp& hvp) const;
};

/// t = 0, s = 0, r = p = -g, with the single product H(-g) shared between
/// Hr and Hp. Throws ZeroGradientError when g = 0 (callers treat that as
/// converged before reaching the solver).
CrState cr_init(const LinearOp& hvp, const Vec& g);

/// One CR update costing exactly one product (H p is advanced by the
/// recurrence Hp' = Hr' + gamma Hp). Throws OperatorNotPdError when
/// <r, Hr> <= 0 (the operator is not positive definite on the Krylov space,
/// signalling a regularization or convexity violation upstream) and
/// BreakdownError when |Hp|^2 < 1e-300.
void cr_step(CrState& state, const LinearOp& hvp);

struct CrSolveResult {
  Vec s;
  double rnorm = 0.0;
  int iterations = 0;
};

/// Runs CR until |r| <= tol * |g| or `max_iter` steps. Product count is
/// iterations + 1. Requires tol in [0, 1) and max_iter >= 1.
CrSolveResult cr_solve(const LinearOp& hvp, const Vec& g, double tol, int max_iter,
                       CrState* out_state = nullptr);

struct PropertyCheck {
  std::string name;
  bool pass = true;
  double worst_margin = 0.0;  // smallest slack observed; negative means violated beyond tolerance
};

struct CrPropertyReport {
  std::vector<PropertyCheck> checks;
  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
  const PropertyCheck* find(const std::string& name) const;
};

/// Audits a finished instrumented run against the CR invariants plus the
/// eigenvalue bounds 1/lambda_max <= alpha_t <= 1/lambda_min and the
/// telescoping bound <g,s_t> <= <g,s_{t-1}> - |r_{t-1}|^2 / lambda_max.
/// lambda_min/lambda_max must come from an independent dense decomposition.
/// Set ran_to_grade when the run was driven to the grade of g, enabling the
/// exact-solution residual check there.
CrPropertyReport verify_cr_properties(const CrState& state, double lambda_min, double lambda_max,
                                      bool ran_to_grade);

}  // namespace fncr
