#include "fncr/solvers.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <limits>

#include "fncr/line_search.hpp"

namespace fncr {

void SolverConfig::validate() const {
  if (!(rho > 0.0 && rho < 0.5)) throw ConfigError("rho must be in (0, 1/2)");
  if (!(omega >= 0.0 && omega < 1.0)) throw ConfigError("omega must be in [0, 1)");
  if (T < 1) throw ConfigError("T must be >= 1");
  if (T_max < T) throw ConfigError("T_max must be >= T");
  if (!(zeta > 0.0 && zeta < 1.0)) throw ConfigError("zeta must be in (0, 1)");
  if (!(eta0 > 0.0)) throw ConfigError("eta0 must be > 0");
  if (sigma < 0.0) throw ConfigError("sigma must be >= 0");
  if (theta < 0.0) throw ConfigError("theta must be >= 0");
  if (!(grad_tol >= 0.0)) throw ConfigError("grad_tol must be >= 0");
  if (oracle_budget < 1) throw ConfigError("oracle_budget must be >= 1");
  if (max_outer < 1) throw ConfigError("max_outer must be >= 1");
  if (check_window < 1) throw ConfigError("check_window must be >= 1");
  if (!(ls_rho > 0.0 && ls_rho < 0.5)) throw ConfigError("ls_rho must be in (0, 1/2)");
  if (superlinear_schedule && !(kappa_hint > 0.0))
    throw ConfigError("the superlinear schedule needs kappa_hint > 0");
}

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Converged: return "Converged";
    case SolveStatus::BudgetExhausted: return "BudgetExhausted";
    case SolveStatus::MaxOuterReached: return "MaxOuterReached";
    case SolveStatus::LineSearchFailed: return "LineSearchFailed";
    case SolveStatus::SolverError: return "SolverError";
  }
  return "?";
}

double local_radius(double mu, double lh, double rho) {
  if (lh <= 0.0) return std::numeric_limits<double>::infinity();
  return 3.0 * (1.0 - 2.0 * rho) * mu * mu / lh;
}

namespace {

struct StepProposal {
  Vec direction;
  double gs = 0.0;
  std::optional<DirectionType> dtype;
  int inner_t = 0;
  std::optional<double> f_at_full_step;
};

using StepFn = std::function<StepProposal(const Vec& x, const Vec& g, double gnorm, double f)>;

/// Shared outer loop: per iteration one gradient evaluation, a direction
/// proposal, the backtracking line search, the iterate update, and one trace
/// record. Descent is strict by the sufficient-reduction acceptance, so f
/// decreases strictly across records. The budget is checked after each
/// completed iteration; no record is ever written more than one iteration
/// past the budget.
SolveResult run_outer(Oracle& oracle, Vec x0, const SolverConfig& cfg,
                      std::optional<double> f_star, const StepFn& propose) {
  cfg.validate();
  require_finite(x0, "initial iterate");
  if (x0.size() != oracle.dim()) throw DimensionMismatch(x0.size(), oracle.dim());

  const auto t_start = std::chrono::steady_clock::now();
  const auto wall_ns = [&t_start]() {
    return static_cast<std::int64_t>(std::chrono::duration_cast<std::chrono::nanoseconds>(
                                         std::chrono::steady_clock::now() - t_start)
                                         .count());
  };

  SolveResult res;
  res.x = std::move(x0);
  res.status = SolveStatus::MaxOuterReached;

  double f = oracle.eval_f(res.x);
  if (!std::isfinite(f)) {
    res.status = SolveStatus::SolverError;
    res.message = "objective is not finite at the initial iterate";
    res.units_final = oracle.counter().units();
    return res;
  }

  double gnorm = std::numeric_limits<double>::quiet_NaN();
  for (int k = 0; k < cfg.max_outer; ++k) {
    Vec g;
    try {
      g = oracle.eval_grad(res.x);
      gnorm = norm2(g);
      if (gnorm <= cfg.grad_tol) {
        res.status = SolveStatus::Converged;
        break;
      }

      StepProposal step = propose(res.x, g, gnorm, f);
      LineSearchResult ls = backtrack(oracle, res.x, step.direction, f, step.gs, cfg.ls_rho,
                                      cfg.zeta, cfg.eta0, step.f_at_full_step);
      axpy(ls.eta, step.direction, res.x);
      require_finite(res.x, "iterate");

      TraceRecord rec;
      rec.k = k;
      rec.f = f;
      rec.gnorm = gnorm;
      if (f_star) rec.delta = f - *f_star;
      rec.oracle_units = oracle.counter().units();
      rec.wall_ns = wall_ns();
      rec.dtype = step.dtype;
      rec.eta = ls.eta;
      rec.inner_t = step.inner_t;
      rec.ls_backtracks = ls.backtracks;
      rec.gs = step.gs;
      res.trace.push_back(rec);
      if (step.dtype && *step.dtype == DirectionType::Ins) ++res.ins_count;

      f = ls.f_new;
    } catch (const LineSearchFailure& e) {
      res.status = SolveStatus::LineSearchFailed;
      res.message = e.what();
      break;
    } catch (const OperatorNotPdError& e) {
      res.status = SolveStatus::SolverError;
      res.message = e.what();
      break;
    } catch (const BreakdownError& e) {
      res.status = SolveStatus::SolverError;
      res.message = e.what();
      break;
    } catch (const NonFiniteError& e) {
      res.status = SolveStatus::SolverError;
      res.message = e.what();
      break;
    } catch (const ZeroGradientError& e) {
      res.status = SolveStatus::SolverError;
      res.message = e.what();
      break;
    }

    if (oracle.counter().units() > cfg.oracle_budget) {
      res.status = SolveStatus::BudgetExhausted;
      break;
    }
  }

  res.f_final = f;
  res.gnorm_final = gnorm;
  res.iterations = static_cast<int>(res.trace.size());
  res.units_final = oracle.counter().units();
  return res;
}

}  // namespace

SolveResult fncr_ls(Oracle& oracle, Vec x0, const SolverConfig& cfg,
                    std::optional<double> f_star) {
  cfg.validate();
  RegularizedOracle rop = cfg.sigma > 0.0 ? RegularizedOracle::gradient_reg(oracle, cfg.sigma)
                                          : RegularizedOracle::none(oracle);
  const StepFn propose = [&rop, &cfg](const Vec& x, const Vec& g, double gnorm, double f) {
    if (rop.mode() == RegMode::GradientReg) rop.set_iterate_gradient_norm(gnorm);
    SolverConfig inner_cfg = cfg;
    int t_override = -1;
    if (cfg.theta > 0.0) {
      const double t_req = std::ceil(cfg.theta / std::min(1.0, std::sqrt(gnorm)));
      t_override = static_cast<int>(std::min(t_req, static_cast<double>(cfg.T_max)));
      t_override = std::max(1, t_override);
    }
    if (cfg.superlinear_schedule) {
      inner_cfg.omega = std::min(cfg.omega, gnorm);
      const double t_req =
          std::ceil(std::sqrt(cfg.kappa_hint) * std::log(2.0 / std::min(1.0, gnorm)) / 4.0);
      t_override = static_cast<int>(
          std::min(std::max(t_req, 1.0), static_cast<double>(cfg.T_max)));
    }
    InnerResult inner = fn_cr_solve(rop, x, g, f, inner_cfg, t_override);
    StepProposal step;
    step.direction = std::move(inner.direction);
    step.gs = inner.gs;
    step.dtype = inner.dtype;
    step.inner_t = inner.t_used;
    step.f_at_full_step = inner.f_at_direction;
    return step;
  };
  return run_outer(oracle, std::move(x0), cfg, f_star, propose);
}

SolveResult newton_cg_ls(Oracle& oracle, Vec x0, const SolverConfig& cfg,
                         std::optional<double> f_star) {
  const StepFn propose = [&oracle, &cfg](const Vec& x, const Vec& g, double gnorm, double /*f*/) {
    const int dim = static_cast<int>(g.size());
    const int t_max = std::max(1, std::min(cfg.T_max, dim));

    // Conjugate gradient on H s = -g from s = 0.
    Vec s(g.size(), 0.0);
    Vec r = negated(g);
    Vec p = r;
    double rr = dot(r, r);
    int t = 0;
    while (t < t_max && std::sqrt(rr) > cfg.omega * gnorm) {
      Vec hp = oracle.eval_hvp(x, p);
      const double php = dot(p, hp);
      if (php <= 0.0)
        throw OperatorNotPdError("CG met non-positive curvature <p, Hp> = " + std::to_string(php));
      const double alpha = rr / php;
      axpy(alpha, p, s);
      axpy(-alpha, hp, r);
      const double rr_next = dot(r, r);
      const double beta = rr_next / rr;
      rr = rr_next;
      for (std::size_t i = 0; i < p.size(); ++i) p[i] = r[i] + beta * p[i];
      ++t;
    }
    StepProposal step;
    step.gs = dot(g, s);
    step.direction = std::move(s);
    step.inner_t = t;
    return step;
  };
  return run_outer(oracle, std::move(x0), cfg, f_star, propose);
}

SolveResult gd_ls(Oracle& oracle, Vec x0, const SolverConfig& cfg, std::optional<double> f_star) {
  const StepFn propose = [](const Vec& /*x*/, const Vec& g, double gnorm, double /*f*/) {
    StepProposal step;
    step.direction = negated(g);
    step.gs = -gnorm * gnorm;
    step.inner_t = 0;
    return step;
  };
  return run_outer(oracle, std::move(x0), cfg, f_star, propose);
}

}  // namespace fncr
