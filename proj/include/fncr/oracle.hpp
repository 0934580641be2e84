#pragma once

#include <cmath>
#include <cstdint>

#include "fncr/vec.hpp"

namespace fncr {

/// Evaluation cost accounting. A function evaluation costs one unit, a
/// gradient one unit, a Hessian-vector product two units; units are always
/// derived from the three counters, never stored.
struct OracleCounter {
  std::int64_t f_evals = 0;
  std::int64_t grad_evals = 0;
  std::int64_t hvp_evals = 0;

  std::int64_t units() const { return f_evals + grad_evals + 2 * hvp_evals; }

  void reset() { f_evals = grad_evals = hvp_evals = 0; }
};

/// Matrix-free objective: value, gradient, and Hessian-vector product.
/// Implementations must be deterministic (identical inputs give bit-identical
/// outputs within a process) and must never materialize the Hessian.
class Problem {
 public:
  virtual ~Problem() = default;

  virtual std::size_t dim() const = 0;
  virtual double value(const Vec& x) const = 0;
  virtual void gradient(const Vec& x, Vec& g) const = 0;
  virtual void hessian_vec(const Vec& x, const Vec& v, Vec& hv) const = 0;
};

/// Counted access to a Problem. Every solver in this library observes the
/// objective exclusively through an Oracle, so the counter is the complete
/// cost record of a run.
class Oracle {
 public:
  explicit Oracle(const Problem& problem) : problem_(&problem) {}

  std::size_t dim() const { return problem_->dim(); }

  /// One f unit. The raw value is returned even if non-finite; sufficiency
  /// checks treat a non-finite trial value as "not sufficient" rather than
  /// as a hard error.
  double eval_f(const Vec& x) {
    ++counter_.f_evals;
    return problem_->value(x);
  }

  /// One grad unit. Throws NonFiniteError if the gradient contains NaN/Inf.
  Vec eval_grad(const Vec& x) {
    ++counter_.grad_evals;
    Vec g(problem_->dim());
    problem_->gradient(x, g);
    require_finite(g, "gradient");
    return g;
  }

  /// Two units. Throws NonFiniteError if the product contains NaN/Inf.
  Vec eval_hvp(const Vec& x, const Vec& v) {
    ++counter_.hvp_evals;
    Vec hv(problem_->dim());
    problem_->hessian_vec(x, v, hv);
    require_finite(hv, "hessian-vector product");
    return hv;
  }

  const Problem& problem() const { return *problem_; }
  OracleCounter& counter() { return counter_; }
  const OracleCounter& counter() const { return counter_; }

 private:
  const Problem* problem_;
  OracleCounter counter_;
};

enum class RegMode { None, Constant, GradientReg };

/// Hessian operator with an optional diagonal shift: pass-through, a constant
/// shift h*I, or the gradient regularization sigma*sqrt(|g(x)|)*I. For the
/// gradient mode, sqrt(|g|) is frozen once per outer iterate (when the
/// gradient is computed) and reused for every product of that inner solve, so
/// the inner linear system is stationary. The shift is a vector axpy and adds
/// zero oracle units.
class RegularizedOracle {
 public:
  static RegularizedOracle none(Oracle& oracle) { return RegularizedOracle(oracle, RegMode::None, 0.0); }

  static RegularizedOracle constant_shift(Oracle& oracle, double h) {
    if (!(h > 0.0)) throw ConfigError("constant regularization requires h > 0");
    return RegularizedOracle(oracle, RegMode::Constant, h);
  }

  static RegularizedOracle gradient_reg(Oracle& oracle, double sigma) {
    if (!(sigma > 0.0)) throw ConfigError("gradient regularization requires sigma > 0");
    return RegularizedOracle(oracle, RegMode::GradientReg, sigma);
  }

  RegMode mode() const { return mode_; }

  /// Freezes sqrt(|g_k|) for the current outer iterate (GradientReg mode).
  void set_iterate_gradient_norm(double gnorm) {
    if (gnorm < 0.0) throw ConfigError("gradient norm must be non-negative");
    cached_sqrt_gnorm_ = std::sqrt(gnorm);
    cache_set_ = true;
  }

  void clear_iterate() { cache_set_ = false; }

  /// Current diagonal shift. Throws if GradientReg and no iterate is frozen.
  double shift() const;

  /// Mode-adjusted product; exactly one hvp on the inner counter.
  Vec hvp(const Vec& x, const Vec& v);

  double eval_f(const Vec& x) { return oracle_->eval_f(x); }
  Vec eval_grad(const Vec& x) { return oracle_->eval_grad(x); }

  Oracle& inner() { return *oracle_; }
  const Oracle& inner() const { return *oracle_; }

 private:
  RegularizedOracle(Oracle& oracle, RegMode mode, double param)
      : oracle_(&oracle), mode_(mode), param_(param) {}

  Oracle* oracle_;
  RegMode mode_;
  double param_ = 0.0;  // h for Constant, sigma for GradientReg
  double cached_sqrt_gnorm_ = 0.0;
  bool cache_set_ = false;
};

}  // namespace fncr
