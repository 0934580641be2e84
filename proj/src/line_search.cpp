#include "fncr/line_search.hpp"

#include <cmath>

namespace fncr {

namespace {
constexpr int kMaxBacktracks = 60;  // below zeta^60 the step is numerically zero
}

LineSearchResult backtrack(Oracle& oracle, const Vec& x, const Vec& s, double f_x, double gs,
                           double rho, double zeta, double eta0,
                           std::optional<double> f_at_full_step) {
  if (!(gs < 0.0)) throw ConfigError("line search requires a descent direction (<g,s> < 0)");
  if (!(zeta > 0.0 && zeta < 1.0)) throw ConfigError("line search requires zeta in (0, 1)");
  if (!(eta0 > 0.0)) throw ConfigError("line search requires eta0 > 0");
  if (!(rho > 0.0 && rho < 0.5)) throw ConfigError("line search requires rho in (0, 1/2)");

  double eta = eta0;
  for (int j = 0; j <= kMaxBacktracks; ++j) {
    double f_trial;
    if (j == 0 && eta0 == 1.0 && f_at_full_step) {
      f_trial = *f_at_full_step;  // the inner solver already paid for this value
    } else {
      Vec trial = x;
      axpy(eta, s, trial);
      f_trial = oracle.eval_f(trial);
    }
    if (std::isfinite(f_trial) && f_x - f_trial >= rho * eta * (-gs)) {
      LineSearchResult res;
      res.eta = eta;
      res.backtracks = j;
      res.f_new = f_trial;
      res.accepted = scaled(eta, s);
      return res;
    }
    eta *= zeta;
  }
  throw LineSearchFailure("no sufficient step above eta = " + std::to_string(eta / zeta) +
                          "; the oracle is inconsistent with a descent direction");
}

double eta_floor(double gs_abs, double h, double lh, double rho, double zeta) {
  if (lh <= 0.0) return 1.0;
  const double bound =
      zeta * std::sqrt(3.0 * (1.0 - 2.0 * rho) / lh) * std::pow(h, 0.75) / std::pow(gs_abs, 0.25);
  return std::min(1.0, bound);
}

}  // namespace fncr
