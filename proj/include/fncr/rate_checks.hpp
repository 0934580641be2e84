#pragma once

#include <string>
#include <vector>

#include "fncr/problems.hpp"
#include "fncr/solvers.hpp"

namespace fncr {

struct RateCheckEntry {
  std::string name;
  bool applicable = false;  // parameterization / data requirements met
  bool pass = true;         // vacuously true when not applicable
  int n_checked = 0;
  double worst_margin = 0.0;
  std::string note;
};

struct RateCheckReport {
  std::vector<RateCheckEntry> entries;
  bool all_pass() const {
    for (const auto& e : entries)
      if (e.applicable && !e.pass) return false;
    return true;
  }
  const RateCheckEntry* find(const std::string& name) const;
};

/// Convergence-rate diagnostics over a finished trace, using spectrum and
/// Lipschitz estimates (each applied with the given multiplicative slack).
///
///  - condition_free_linear_envelope: delta_k <= (1 + slack) * delta_0 /
///    (1 + rho)^{k/2}; applicable when omega <= sqrt(1/(2 kappa)), the
///    sufficient-iteration threshold reached ceil(sqrt(kappa) ln(8 kappa)/4)
///    (or the dimension), and deltas are present.
///  - local_quadratic_phase: |g_{k+1}| <= (1 + slack) * (L_H / mu^2) |g_k|^2
///    for every k with |g_k| inside the conservatively shrunk quadratic-phase
///    radius.
///  - regularized_no_backtracking: zero backtracks at every iteration and
///    f_{k+1} < f_k - (1 - slack) * (2 rho / sqrt(2 L_H)) |g_k|^{3/2};
///    applicable when sigma = sqrt(L_H / 2) (within slack), rho <= 1/6,
///    omega = 0, and T = T_max.
RateCheckReport rate_checks(const SolveResult& result, const ProblemInfo& info,
                            const SolverConfig& cfg, std::size_t problem_dim,
                            double slack = 0.10);

}  // namespace fncr
