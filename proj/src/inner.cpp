#include "fncr/inner.hpp"

#include <algorithm>
#include <cmath>

namespace fncr {

const char* to_string(DirectionType t) {
  switch (t) {
    case DirectionType::Suf: return "SUF";
    case DirectionType::Ins: return "INS";
    case DirectionType::Ter: return "TER";
  }
  return "?";
}

SufficiencyCheck is_c_sufficient(Oracle& oracle, const Vec& x, double f_x, const Vec& d,
                                 double gs, double c) {
  if (!(gs < 0.0)) throw ConfigError("sufficiency check requires a descent direction (<g,d> < 0)");
  SufficiencyCheck chk;
  chk.f_trial = oracle.eval_f(add(x, d));
  chk.reduction = f_x - chk.f_trial;
  // Non-finite trial values count as insufficient: an overshoot into an
  // overflow region must trigger fallback, not propagate.
  chk.sufficient = std::isfinite(chk.f_trial) && chk.reduction >= c * (-gs);
  return chk;
}

CheckpointWindow::CheckpointWindow(int capacity) : capacity_(std::max(1, capacity)) {
  ring_.resize(static_cast<std::size_t>(capacity_));
}

void CheckpointWindow::clear() { lo_ = hi_ = 0; }

void CheckpointWindow::push(int t, const Vec& s) {
  if (hi_ != t) {  // non-contiguous push restarts the window
    lo_ = t;
    hi_ = t;
  }
  ring_[static_cast<std::size_t>(t % capacity_)] = s;
  hi_ = t + 1;
  if (hi_ - lo_ > capacity_) lo_ = hi_ - capacity_;
}

bool CheckpointWindow::has(int t) const { return t >= lo_ && t < hi_; }

const Vec& CheckpointWindow::at(int t) const {
  if (!has(t)) throw Error("checkpoint window does not hold iterate " + std::to_string(t));
  return ring_[static_cast<std::size_t>(t % capacity_)];
}

namespace {

struct Candidate {
  int t = -1;
  double reduction = 0.0;
  double f_trial = 0.0;
  Vec direction;
};

// Greatest evaluated reduction wins; ties go to the larger iterate index,
// which reuses more Krylov work.
void keep_best(Candidate& best, int t, const SufficiencyCheck& chk, const Vec& dir) {
  if (best.t < 0 || chk.reduction > best.reduction ||
      (chk.reduction == best.reduction && t > best.t)) {
    best.t = t;
    best.reduction = chk.reduction;
    best.f_trial = chk.f_trial;
    best.direction = dir;
  }
}

}  // namespace

InnerResult fn_cr_solve(RegularizedOracle& oracle, const Vec& x, const Vec& g, double f_x,
                        const SolverConfig& cfg, int t_override, CrState* out_state) {
  const int dim = static_cast<int>(g.size());
  const int t_max = std::max(1, std::min(cfg.T_max, dim));
  const int t_suf = std::max(1, std::min(t_override > 0 ? t_override : cfg.T, t_max));
  const int window = std::max(1, cfg.check_window);

  LinearOp hvp = [&oracle, &x](const Vec& v) { return oracle.hvp(x, v); };
  CrState st = cr_init(hvp, g);
  const double gnorm = st.gnorm;

  CheckpointWindow stored(window + 1);
  Candidate last_pass;  // most recent passing checkpoint, direction copied out
  int checks = 0;

  const auto rho_at = [&st, &cfg, gnorm](int t) {
    const double rprev = st.rnorm_hist[static_cast<std::size_t>(t - 1)];
    return cfg.rho * gnorm * gnorm / (rprev * rprev);
  };

  const auto make_result = [&](Vec dir, DirectionType dtype, int t_dir,
                               std::optional<double> f_dir, std::optional<double> red) {
    InnerResult res;
    res.direction = std::move(dir);
    res.dtype = dtype;
    res.t_used = st.t;
    res.t_direction = t_dir;
    res.rnorm = st.rnorm_hist[static_cast<std::size_t>(t_dir)];
    res.gs = st.gs_hist[static_cast<std::size_t>(t_dir)];
    res.checks_performed = checks;
    res.f_at_direction = f_dir;
    res.best_reduction = red;
    if (out_state) *out_state = std::move(st);
    return res;
  };

  while (true) {
    const int t = st.t;
    std::optional<double> f_here;    // cached f(x + s_t) from a passing check at this t
    std::optional<double> red_here;

    // Sufficient-iteration / sufficient-descent guard, checkpointed at
    // t = T + W*m. A failure at T returns the iterate as-is; a later failure
    // falls back to the best evaluated candidate inside the failed window.
    if (t >= t_suf && (t - t_suf) % window == 0) {
      const double rho_t = rho_at(t);
      const SufficiencyCheck chk =
          is_c_sufficient(oracle.inner(), x, f_x, st.s, st.gs_hist.back(), rho_t);
      ++checks;
      if (!chk.sufficient) {
        if (t == t_suf)
          return make_result(st.s, DirectionType::Ins, t, chk.f_trial, chk.reduction);

        // Bisect (last passing checkpoint, failing checkpoint), keeping the
        // evaluated candidate with the greatest actual reduction. With
        // window = 1 the interval is empty and the previous iterate is
        // returned directly.
        Candidate best = last_pass;
        int lo = last_pass.t;
        int hi = t;
        while (hi - lo > 1) {
          const int mid = lo + (hi - lo) / 2;
          const Vec& s_mid = stored.at(mid);
          const SufficiencyCheck mid_chk = is_c_sufficient(
              oracle.inner(), x, f_x, s_mid, st.gs_hist[static_cast<std::size_t>(mid)],
              rho_at(mid));
          ++checks;
          if (mid_chk.sufficient) {
            keep_best(best, mid, mid_chk, s_mid);
            lo = mid;
          } else {
            hi = mid;
          }
        }
        return make_result(best.direction, DirectionType::Suf, best.t, best.f_trial,
                           best.reduction);
      }
      last_pass.t = t;
      last_pass.reduction = chk.reduction;
      last_pass.f_trial = chk.f_trial;
      last_pass.direction = st.s;
      f_here = chk.f_trial;
      red_here = chk.reduction;
    }

    // Residual / max-iteration exits. The residual comparison is floored at
    // the numerical-zero level: at the grade the exact-arithmetic residual is
    // zero and this exit fires for any omega.
    if (st.rnorm() <= std::max(cfg.omega, kResidualZeroRel) * gnorm || t == t_max)
      return make_result(st.s, DirectionType::Ter, t, f_here, red_here);

    cr_step(st, hvp);
    stored.push(st.t, st.s);
  }
}

}  // namespace fncr
