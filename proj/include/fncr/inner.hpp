#pragma once

#include <optional>
#include <vector>

#include "fncr/config.hpp"
#include "fncr/cr.hpp"
#include "fncr/oracle.hpp"

namespace fncr {

/// How the inner solve ended.
///   Suf: a verified rho_t-sufficient iterate at some t >= T (hence
///        rho-sufficient, since rho_t >= rho and residuals are monotone).
///   Ins: the T-th iterate failed its sufficiency check.
///   Ter: the residual condition |r| <= omega |g| fired (floored at the
///        numerical-zero residual, see kResidualZeroRel), or t = T_max.
enum class DirectionType { Suf, Ins, Ter };

const char* to_string(DirectionType t);

struct InnerResult {
  Vec direction;
  DirectionType dtype = DirectionType::Ter;
  int t_used = 0;       // CR iterations performed (product count is t_used + 1)
  int t_direction = 0;  // iterate index of the returned direction
  double rnorm = 0.0;   // residual norm at t_direction
  double gs = 0.0;      // <g, direction>, always negative
  int checks_performed = 0;  // sufficiency f-evaluations spent
  std::optional<double> f_at_direction;  // cached f(x + direction) when a check evaluated it
  std::optional<double> best_reduction;  // f(x) - f(x + direction) when known
};

struct SufficiencyCheck {
  bool sufficient = false;
  double f_trial = 0.0;
  double reduction = 0.0;  // f_x - f_trial
};

/// Condition test against the linear surrogate: d is c-sufficient iff
/// f(x) - f(x+d) >= c * (-<g, d>). Costs one f unit; the trial value is
/// returned for reuse. A non-finite trial value counts as not sufficient so
/// overshoots into overflow trigger fallback instead of crashing.
/// Requires gs < 0.
SufficiencyCheck is_c_sufficient(Oracle& oracle, const Vec& x, double f_x, const Vec& d,
                                 double gs, double c);

/// Ring buffer of iterate copies between sufficiency checkpoints, so the
/// failure-time search needs no CR re-runs. Memory is capacity * dim floats.
class CheckpointWindow {
 public:
  explicit CheckpointWindow(int capacity);

  void clear();
  void push(int t, const Vec& s);
  bool has(int t) const;
  const Vec& at(int t) const;

 private:
  int capacity_;
  int lo_ = 0, hi_ = 0;  // stored iterate indices are [lo_, hi_)
  std::vector<Vec> ring_;
};

/// CR with the sufficient-iteration and sufficient-descent conditions.
///
/// Loop guard, in order: for t >= T at checkpoint indices t = T + W*m the
/// current iterate is tested for rho_t-sufficiency (rho_t =
/// rho * |g|^2 / |r_{t-1}|^2, non-decreasing); a failure at t = T returns
/// that iterate as Ins, a failure at a later checkpoint searches the stored
/// window for the evaluated candidate with the greatest actual reduction and
/// returns it as Suf (ties toward larger t). Between those tests, the
/// residual exit |r| <= omega |g| and the cap t = T_max return the current
/// iterate as Ter. W = cfg.check_window; W = 1 checks every iteration.
///
/// Accounting: t_used + 1 products, checks_performed f-evaluations, zero
/// gradient evaluations.
///
/// f_x must be the already-evaluated objective value at x. t_override > 0
/// replaces cfg.T (used by the theta schedule). out_state exposes the
/// instrumented CR state to tests.
InnerResult fn_cr_solve(RegularizedOracle& oracle, const Vec& x, const Vec& g, double f_x,
                        const SolverConfig& cfg, int t_override = -1,
                        CrState* out_state = nullptr);

}  // namespace fncr
