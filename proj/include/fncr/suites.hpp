#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "fncr/cr.hpp"
#include "fncr/problems.hpp"

namespace fncr {

/// Seeded SPD test system for the CR property suites: d = 20, condition
/// number log-uniform in [1, 1e6] (endpoints pinned when cond > 1), Gaussian
/// right-hand side.
struct SpdInstance {
  QuadraticProblem problem;
  Vec g;
  double cond;
};

SpdInstance make_spd_instance(std::uint64_t seed, std::size_t d = 20);

struct SuiteOutcome {
  int failures = 0;
  int checks = 0;
};

/// Property suite over `n_seeds` seeded systems: runs instrumented CR to the
/// grade and audits every invariant (monotone residuals and iterates, bounded
/// operator images, descent inner products, conjugacy, alpha eigenvalue
/// bounds, telescoping descent) plus the residual rate envelope
/// |r_t| <= 2 ((sqrt(k)-1)/(sqrt(k)+1))^t |g|, floored at 1e-12 relative for
/// measurement noise.
SuiteOutcome suite_cr_properties(std::ostream& out, int n_seeds = 1000, bool check_rate = true);

/// The alpha bounds and telescoping inequality alone, on the seeded systems
/// and on a hand-computed 2x2 fixture.
SuiteOutcome suite_lemma_bounds(std::ostream& out, int n_seeds = 200);

/// Configured solver runs whose traces must satisfy the rate diagnostics:
/// the condition-number-free linear envelope, the local quadratic phase, and
/// the regularized no-backtracking descent bound.
SuiteOutcome suite_rate_checks(std::ostream& out);

}  // namespace fncr
