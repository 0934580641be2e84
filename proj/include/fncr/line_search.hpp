#pragma once

#include <optional>

#include "fncr/oracle.hpp"

namespace fncr {

struct LineSearchResult {
  double eta = 1.0;   // accepted step size eta0 * zeta^j
  int backtracks = 0;  // j, number of rejected trials
  double f_new = 0.0;  // f(x + eta*s)
  Vec accepted;        // eta * s
};

/// Backtracking against the sufficient-reduction condition
/// f(x + eta s) <= f(x) + rho * eta * <g, s>, trying eta0 * zeta^j for
/// j = 0, 1, ... in order (one f unit per trial). Requires gs < 0. A
/// non-finite trial value counts as a rejection. j is capped at 60 (below
/// 2^-60 the step is numerically zero in 64-bit floats, and a genuine descent
/// direction under a Lipschitz Hessian is guaranteed acceptance well before
/// that); hitting the cap throws LineSearchFailure since it indicates an
/// inconsistent oracle.
///
/// f_at_full_step, when provided and eta0 == 1, is reused as the j = 0 trial
/// value at zero cost (the inner solver's sufficiency check already paid for
/// it).
LineSearchResult backtrack(Oracle& oracle, const Vec& x, const Vec& s, double f_x, double gs,
                           double rho, double zeta, double eta0,
                           std::optional<double> f_at_full_step = std::nullopt);

/// Analytic lower bound on the accepted step size:
///   min{1, zeta * sqrt(3(1 - 2 rho)/L_H) * h^{3/4} / |<g,s>|^{1/4}},
/// where h is a curvature floor for the operator that generated s (the
/// strong-convexity constant for unregularized runs, sigma*sqrt(|g|) for
/// gradient-regularized ones). Returns 1 when L_H = 0: on quadratics the
/// unit step is always accepted. Diagnostic only.
double eta_floor(double gs_abs, double h, double lh, double rho, double zeta);

}  // namespace fncr
