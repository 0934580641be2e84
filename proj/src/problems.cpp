#include "fncr/problems.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "fncr/rng.hpp"

namespace fncr {

namespace {

Eigen::MatrixXd as_eigen(const std::vector<double>& a, std::size_t d) {
  Eigen::MatrixXd m(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) m(i, j) = a[i * d + j];
  return m;
}

// Q diag(lambda) Q^T assembled symmetric by construction (upper triangle
// computed once and mirrored).
std::vector<double> assemble_spd(const Eigen::MatrixXd& q, const std::vector<double>& lambda) {
  const std::size_t d = lambda.size();
  std::vector<double> a(d * d, 0.0);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i; j < d; ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < d; ++k) acc += lambda[k] * q(i, k) * q(j, k);
      a[i * d + j] = acc;
      a[j * d + i] = acc;
    }
  }
  return a;
}

Eigen::MatrixXd random_orthogonal(SplitMix64& rng, std::size_t d) {
  Eigen::MatrixXd m(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) m(i, j) = rng.gaussian();
  return Eigen::HouseholderQR<Eigen::MatrixXd>(m).householderQ();
}

}  // namespace

QuadraticProblem::QuadraticProblem(std::vector<double> a_row_major, Vec b)
    : a_(std::move(a_row_major)), b_(std::move(b)) {
  const std::size_t d = b_.size();
  if (d == 0) throw ConfigError("quadratic problem needs dimension >= 1");
  if (a_.size() != d * d) throw DimensionMismatch(a_.size(), d * d);
  require_finite(a_, "quadratic matrix");
  require_finite(b_, "quadratic rhs");

  double max_abs = 0.0;
  for (double v : a_) max_abs = std::max(max_abs, std::abs(v));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j)
      if (std::abs(a_[i * d + j] - a_[j * d + i]) > 1e-12 * std::max(1.0, max_abs))
        throw ConfigError("quadratic matrix is not symmetric to 1e-12");

  const Eigen::MatrixXd a = as_eigen(a_, d);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a);
  if (eig.info() != Eigen::Success) throw Error("eigendecomposition failed");
  lambda_min_ = eig.eigenvalues().minCoeff();
  lambda_max_ = eig.eigenvalues().maxCoeff();
  if (!(lambda_min_ > 0.0))
    throw OperatorNotPdError("quadratic matrix is not positive definite (lambda_min = " +
                             std::to_string(lambda_min_) + ")");

  const Eigen::Map<const Eigen::VectorXd> bv(b_.data(), d);
  const Eigen::VectorXd sol = a.llt().solve(bv);
  known_solution_.assign(sol.data(), sol.data() + d);
}

QuadraticProblem QuadraticProblem::random_spd(std::uint64_t seed, std::size_t d, double cond) {
  if (d < 1) throw ConfigError("random_spd needs d >= 1");
  if (!(cond >= 1.0)) throw ConfigError("random_spd needs cond >= 1");
  SplitMix64 rng(seed);
  std::vector<double> lambda(d);
  if (d == 1) {
    lambda[0] = 1.0;
  } else {
    const double log_cond = std::log10(cond);
    lambda.front() = 1.0;
    lambda.back() = cond;
    for (std::size_t i = 1; i + 1 < d; ++i) lambda[i] = std::pow(10.0, rng.uniform01() * log_cond);
    std::sort(lambda.begin(), lambda.end());
  }
  const Eigen::MatrixXd q = random_orthogonal(rng, d);
  std::vector<double> a = assemble_spd(q, lambda);
  Vec b(d);
  for (double& v : b) v = rng.gaussian();
  return QuadraticProblem(std::move(a), std::move(b));
}

QuadraticProblem QuadraticProblem::from_spectrum(std::uint64_t seed,
                                                 const std::vector<double>& eigenvalues) {
  if (eigenvalues.empty()) throw ConfigError("from_spectrum needs at least one eigenvalue");
  const std::size_t d = eigenvalues.size();
  SplitMix64 rng(seed);
  const Eigen::MatrixXd q = random_orthogonal(rng, d);
  std::vector<double> a = assemble_spd(q, eigenvalues);
  Vec b(d);
  for (double& v : b) v = rng.gaussian();
  return QuadraticProblem(std::move(a), std::move(b));
}

double QuadraticProblem::value(const Vec& x) const {
  const std::size_t d = dim();
  if (x.size() != d) throw DimensionMismatch(x.size(), d);
  double acc = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    double axi = 0.0;
    const double* row = a_.data() + i * d;
    for (std::size_t j = 0; j < d; ++j) axi += row[j] * x[j];
    acc += 0.5 * x[i] * axi - b_[i] * x[i];
  }
  return acc;
}

void QuadraticProblem::gradient(const Vec& x, Vec& g) const {
  const std::size_t d = dim();
  if (x.size() != d) throw DimensionMismatch(x.size(), d);
  g.assign(d, 0.0);
  for (std::size_t i = 0; i < d; ++i) {
    double axi = 0.0;
    const double* row = a_.data() + i * d;
    for (std::size_t j = 0; j < d; ++j) axi += row[j] * x[j];
    g[i] = axi - b_[i];
  }
}

void QuadraticProblem::hessian_vec(const Vec& x, const Vec& v, Vec& hv) const {
  const std::size_t d = dim();
  if (x.size() != d) throw DimensionMismatch(x.size(), d);
  if (v.size() != d) throw DimensionMismatch(v.size(), d);
  hv.assign(d, 0.0);
  for (std::size_t i = 0; i < d; ++i) {
    double acc = 0.0;
    const double* row = a_.data() + i * d;
    for (std::size_t j = 0; j < d; ++j) acc += row[j] * v[j];
    hv[i] = acc;
  }
}

double QuadraticProblem::optimal_value() const { return -0.5 * dot(b_, known_solution_); }

CrossEntropyProblem::CrossEntropyProblem(Dataset data, double mu) : data_(std::move(data)), mu_(mu) {
  data_.validate();
  if (mu_ < 0.0) throw ConfigError("ridge coefficient mu must be >= 0");
}

namespace {

// Stabilized class probabilities and log-partition for one sample.
// logits[j] = <a_i, x_j>; returns lse = max + log(sum exp(z - max)).
double softmax_probs(const double* row, const Vec& x, std::size_t d, std::size_t c,
                     std::vector<double>& logits, std::vector<double>& probs) {
  for (std::size_t j = 0; j < c; ++j) {
    const double* xj = x.data() + j * d;
    double z = 0.0;
    for (std::size_t k = 0; k < d; ++k) z += row[k] * xj[k];
    logits[j] = z;
  }
  double zmax = logits[0];
  for (std::size_t j = 1; j < c; ++j) zmax = std::max(zmax, logits[j]);
  double sum = 0.0;
  for (std::size_t j = 0; j < c; ++j) {
    probs[j] = std::exp(logits[j] - zmax);
    sum += probs[j];
  }
  for (std::size_t j = 0; j < c; ++j) probs[j] /= sum;
  return zmax + std::log(sum);
}

}  // namespace

double CrossEntropyProblem::value(const Vec& x) const {
  if (x.size() != dim()) throw DimensionMismatch(x.size(), dim());
  const std::size_t d = data_.n_features, c = data_.n_classes;
  std::vector<double> logits(c), probs(c);
  double acc = 0.0;
  for (std::size_t i = 0; i < data_.n_samples; ++i) {
    const double lse = softmax_probs(data_.row(i), x, d, c, logits, probs);
    acc += lse - logits[static_cast<std::size_t>(data_.labels[i])];
  }
  if (mu_ != 0.0) acc += mu_ * dot(x, x);
  return acc;
}

void CrossEntropyProblem::gradient(const Vec& x, Vec& g) const {
  if (x.size() != dim()) throw DimensionMismatch(x.size(), dim());
  const std::size_t d = data_.n_features, c = data_.n_classes;
  g.assign(dim(), 0.0);
  std::vector<double> logits(c), probs(c);
  for (std::size_t i = 0; i < data_.n_samples; ++i) {
    const double* row = data_.row(i);
    softmax_probs(row, x, d, c, logits, probs);
    const std::size_t label = static_cast<std::size_t>(data_.labels[i]);
    for (std::size_t j = 0; j < c; ++j) {
      const double coef = probs[j] - (j == label ? 1.0 : 0.0);
      double* gj = g.data() + j * d;
      for (std::size_t k = 0; k < d; ++k) gj[k] += coef * row[k];
    }
  }
  if (mu_ != 0.0) axpy(2.0 * mu_, x, g);
}

void CrossEntropyProblem::hessian_vec(const Vec& x, const Vec& v, Vec& hv) const {
  if (x.size() != dim()) throw DimensionMismatch(x.size(), dim());
  if (v.size() != dim()) throw DimensionMismatch(v.size(), dim());
  const std::size_t d = data_.n_features, c = data_.n_classes;
  hv.assign(dim(), 0.0);
  std::vector<double> logits(c), probs(c), u(c);
  for (std::size_t i = 0; i < data_.n_samples; ++i) {
    const double* row = data_.row(i);
    softmax_probs(row, x, d, c, logits, probs);
    double mean_u = 0.0;
    for (std::size_t j = 0; j < c; ++j) {
      const double* vj = v.data() + j * d;
      double z = 0.0;
      for (std::size_t k = 0; k < d; ++k) z += row[k] * vj[k];
      u[j] = z;
      mean_u += probs[j] * z;
    }
    for (std::size_t j = 0; j < c; ++j) {
      const double w = probs[j] * (u[j] - mean_u);
      double* hj = hv.data() + j * d;
      for (std::size_t k = 0; k < d; ++k) hj[k] += w * row[k];
    }
  }
  if (mu_ != 0.0) axpy(2.0 * mu_, v, hv);
}

SpectrumEstimate estimate_spectrum(Oracle& oracle, const Vec& x, int max_iters, double tol,
                                   std::uint64_t seed) {
  const std::size_t d = oracle.dim();
  SplitMix64 rng(seed);
  SpectrumEstimate est;

  auto power_iterate = [&](const std::function<Vec(const Vec&)>& op, int& iters_out,
                           bool& converged_out) -> double {
    Vec v(d);
    for (double& e : v) e = rng.gaussian();
    double vnorm = norm2(v);
    scale(1.0 / vnorm, v);
    double lambda = 0.0;
    converged_out = false;
    for (int it = 0; it < max_iters; ++it) {
      Vec hv = op(v);
      const double hv_norm = norm2(hv);
      const double rayleigh = dot(v, hv);
      iters_out = it + 1;
      if (hv_norm <= 1e-300) {
        // Operator annihilates the iterate; its dominant eigenvalue is 0.
        lambda = 0.0;
        converged_out = true;
        return lambda;
      }
      if (it > 0 && std::abs(rayleigh - lambda) <= tol * std::max(std::abs(rayleigh), 1e-300)) {
        lambda = rayleigh;
        converged_out = true;
        return lambda;
      }
      lambda = rayleigh;
      scale(1.0 / hv_norm, hv);
      v = std::move(hv);
    }
    return lambda;
  };

  auto hvp = [&](const Vec& v) { return oracle.eval_hvp(x, v); };
  bool conv_max = false, conv_min = false;
  est.lmax_est = power_iterate(hvp, est.iters_max, conv_max);

  const double shift = est.lmax_est;
  auto shifted = [&](const Vec& v) {
    Vec hv = oracle.eval_hvp(x, v);
    Vec out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = shift * v[i] - hv[i];
    return out;
  };
  const double top_of_shifted = power_iterate(shifted, est.iters_min, conv_min);
  est.mu_est = shift - top_of_shifted;
  est.converged = conv_max && conv_min;
  return est;
}

double estimate_lh(Oracle& oracle, const Vec& center, double radius, int n_pairs,
                   std::uint64_t seed) {
  const std::size_t d = oracle.dim();
  SplitMix64 rng(seed);
  // Max over sampled pairs of |H(x) - H(y)| / |x - y|, with the operator norm
  // of the symmetric difference taken by power iteration rather than a single
  // random product (random directions underestimate an operator norm by
  // dimension-dependent factors). Pairs sit at small separation so the ratio
  // reads the local modulus; the separation direction is pushed through the
  // Hessian once so it lies in the range the solver's steps live in.
  const double separation = 0.01 * radius;
  const int power_iters = 8;
  double best = 0.0;
  for (int p = 0; p < n_pairs; ++p) {
    Vec base(center), seed_dir(d);
    const double shell = radius * rng.uniform01();
    Vec u(d);
    for (std::size_t i = 0; i < d; ++i) {
      u[i] = rng.gaussian();
      seed_dir[i] = rng.gaussian();
    }
    const double unorm = norm2(u);
    if (unorm > 0.0) axpy(shell / unorm, u, base);

    Vec step = oracle.eval_hvp(base, seed_dir);
    double step_norm = norm2(step);
    if (step_norm <= 1e-300) {
      step = seed_dir;  // flat operator; fall back to the raw direction
      step_norm = norm2(step);
    }
    Vec partner = base;
    axpy(separation / step_norm, step, partner);
    const double dist = norm2(sub(partner, base));
    if (dist <= 0.0) continue;

    Vec v(d);
    for (double& e : v) e = rng.gaussian();
    double vnorm = norm2(v);
    scale(1.0 / vnorm, v);
    double lambda = 0.0;
    for (int it = 0; it < power_iters; ++it) {
      const Vec diff = sub(oracle.eval_hvp(base, v), oracle.eval_hvp(partner, v));
      const double diff_norm = norm2(diff);
      if (diff_norm <= 1e-300) break;
      lambda = diff_norm;
      v = scaled(1.0 / diff_norm, diff);
    }
    best = std::max(best, lambda / dist);
  }
  return best;
}

ProblemInfo estimate_problem_info(const Problem& problem, const Vec& x0, double lh_radius) {
  Oracle oracle(problem);
  ProblemInfo info;
  const SpectrumEstimate est = estimate_spectrum(oracle, x0);
  info.mu_est = est.mu_est;
  info.lmax_est = est.lmax_est;
  info.kappa_est = est.mu_est > 0.0 ? est.lmax_est / est.mu_est
                                    : std::numeric_limits<double>::infinity();
  info.lh_est = estimate_lh(oracle, x0, lh_radius);
  info.spectrum_converged = est.converged;
  return info;
}

}  // namespace fncr
