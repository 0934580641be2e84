#pragma once

#include <cstdint>
#include <memory>
#include <optional>

#include "fncr/dataset.hpp"
#include "fncr/oracle.hpp"

namespace fncr {

/// f(x) = 0.5<x, Ax> - <b, x> with A symmetric positive definite.
/// Construction verifies symmetry to 1e-12, checks the smallest eigenvalue by
/// dense eigendecomposition, and precomputes the solution of Ax = b by a
/// dense direct solve. Intended for d up to a few hundred.
class QuadraticProblem : public Problem {
 public:
  QuadraticProblem(std::vector<double> a_row_major, Vec b);

  /// A = Q diag(lambda) Q^T with Q from the QR of a seeded Gaussian matrix
  /// and log-spaced eigenvalues in [1, cond] (endpoints pinned, so the
  /// condition number is exactly cond). b is seeded Gaussian.
  static QuadraticProblem random_spd(std::uint64_t seed, std::size_t d, double cond);

  /// A with the given eigenvalue list (one per coordinate, repeats allowed)
  /// under a seeded random orthogonal basis.
  static QuadraticProblem from_spectrum(std::uint64_t seed, const std::vector<double>& eigenvalues);

  std::size_t dim() const override { return b_.size(); }
  double value(const Vec& x) const override;
  void gradient(const Vec& x, Vec& g) const override;
  void hessian_vec(const Vec& x, const Vec& v, Vec& hv) const override;

  const Vec& known_solution() const { return known_solution_; }
  const std::vector<double>& matrix() const { return a_; }
  const Vec& rhs() const { return b_; }
  double lambda_min() const { return lambda_min_; }
  double lambda_max() const { return lambda_max_; }

  /// -0.5<b, A^{-1} b>, the analytic minimum.
  double optimal_value() const;

 private:
  std::vector<double> a_;  // d*d, row-major
  Vec b_;
  Vec known_solution_;
  double lambda_min_ = 0.0;
  double lambda_max_ = 0.0;
};

/// Multinomial logistic regression with ridge term mu*|x|^2 (strongly convex
/// iff mu > 0). Parameters are C stacked blocks of d coefficients. Value,
/// gradient, and Hessian-vector product each make a single pass over the
/// data; the product applies the exact Hessian without forming it. Logits go
/// through log-sum-exp stabilization.
class CrossEntropyProblem : public Problem {
 public:
  CrossEntropyProblem(Dataset data, double mu);

  std::size_t dim() const override { return data_.n_features * data_.n_classes; }
  double value(const Vec& x) const override;
  void gradient(const Vec& x, Vec& g) const override;
  void hessian_vec(const Vec& x, const Vec& v, Vec& hv) const override;

  const Dataset& data() const { return data_; }
  double mu() const { return mu_; }

 private:
  Dataset data_;
  double mu_;
};

struct SpectrumEstimate {
  double mu_est = 0.0;    // smallest Hessian eigenvalue at x
  double lmax_est = 0.0;  // largest
  bool converged = true;  // false if either power iteration hit its cap
  int iters_max = 0;
  int iters_min = 0;
};

/// Extreme Hessian eigenvalues at x by power iteration on H and on
/// (lmax*I - H). Caps at max_iters (default 200) with relative eigenvalue
/// change tolerance tol; on non-convergence the estimates are still returned
/// with converged = false.
SpectrumEstimate estimate_spectrum(Oracle& oracle, const Vec& x, int max_iters = 200,
                                   double tol = 1e-6, std::uint64_t seed = 0x5eed);

/// Hessian-Lipschitz estimate: max over sampled pairs of
/// |H(x)v - H(y)v| / (|x - y| |v|) with x, y in a ball around center.
double estimate_lh(Oracle& oracle, const Vec& center, double radius, int n_pairs = 20,
                   std::uint64_t seed = 0x11a);

struct ProblemInfo {
  double mu_est = 0.0;
  double lmax_est = 0.0;
  double kappa_est = 0.0;
  double lh_est = 0.0;
  std::optional<double> f_star_ref;
  bool spectrum_converged = true;
};

/// Bundles the spectrum and Lipschitz estimates at x0. Uses its own counter
/// so solver-run accounting stays untouched.
ProblemInfo estimate_problem_info(const Problem& problem, const Vec& x0, double lh_radius = 1.0);

}  // namespace fncr
