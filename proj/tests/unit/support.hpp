#pragma once

#include <cmath>
#include <functional>

#include "fncr/cr.hpp"
#include "fncr/oracle.hpp"
#include "fncr/problems.hpp"
#include "fncr/rng.hpp"

namespace fncr::test {

// f(x) = 0.5 |x|^2
class UnitQuadratic : public Problem {
 public:
  explicit UnitQuadratic(std::size_t d) : d_(d) {}
  std::size_t dim() const override { return d_; }
  double value(const Vec& x) const override { return 0.5 * dot(x, x); }
  void gradient(const Vec& x, Vec& g) const override { g = x; }
  void hessian_vec(const Vec&, const Vec& v, Vec& hv) const override { hv = v; }

 private:
  std::size_t d_;
};

// f(x) = sum_i x_i^4
class Quartic : public Problem {
 public:
  explicit Quartic(std::size_t d) : d_(d) {}
  std::size_t dim() const override { return d_; }
  double value(const Vec& x) const override {
    double acc = 0.0;
    for (double v : x) acc += v * v * v * v;
    return acc;
  }
  void gradient(const Vec& x, Vec& g) const override {
    g.resize(d_);
    for (std::size_t i = 0; i < d_; ++i) g[i] = 4.0 * x[i] * x[i] * x[i];
  }
  void hessian_vec(const Vec& x, const Vec& v, Vec& hv) const override {
    hv.resize(d_);
    for (std::size_t i = 0; i < d_; ++i) hv[i] = 12.0 * x[i] * x[i] * v[i];
  }

 private:
  std::size_t d_;
};

// f(x) = sum_i exp(beta x_i) - beta x_i. Convex with minimum at 0; a Newton
// step from negative coordinates overshoots badly because curvature explodes
// ahead of the iterate, so the quadratic model over-predicts the reduction.
class ExpObjective : public Problem {
 public:
  ExpObjective(std::size_t d, double beta) : d_(d), beta_(beta) {}
  std::size_t dim() const override { return d_; }
  double value(const Vec& x) const override {
    double acc = 0.0;
    for (double v : x) acc += std::exp(beta_ * v) - beta_ * v;
    return acc;
  }
  void gradient(const Vec& x, Vec& g) const override {
    g.resize(d_);
    for (std::size_t i = 0; i < d_; ++i) g[i] = beta_ * (std::exp(beta_ * x[i]) - 1.0);
  }
  void hessian_vec(const Vec& x, const Vec& v, Vec& hv) const override {
    hv.resize(d_);
    for (std::size_t i = 0; i < d_; ++i) hv[i] = beta_ * beta_ * std::exp(beta_ * x[i]) * v[i];
  }

 private:
  std::size_t d_;
  double beta_;
};

// Zero objective; for exercising pure regularization shifts.
class ZeroObjective : public Problem {
 public:
  explicit ZeroObjective(std::size_t d) : d_(d) {}
  std::size_t dim() const override { return d_; }
  double value(const Vec&) const override { return 0.0; }
  void gradient(const Vec&, Vec& g) const override { g.assign(d_, 0.0); }
  void hessian_vec(const Vec&, const Vec&, Vec& hv) const override { hv.assign(d_, 0.0); }

 private:
  std::size_t d_;
};

inline LinearOp op_of(const Problem& p, const Vec& x) {
  return [&p, x](const Vec& v) {
    Vec hv(p.dim());
    p.hessian_vec(x, v, hv);
    return hv;
  };
}

// Directional central difference of f, an independent oracle for <g, v>.
inline double fd_directional(const Problem& p, const Vec& x, const Vec& v, double h) {
  Vec xp = x, xm = x;
  axpy(h, v, xp);
  axpy(-h, v, xm);
  return (p.value(xp) - p.value(xm)) / (2.0 * h);
}

// Central difference of the gradient, an independent oracle for H v.
inline Vec fd_hvp(const Problem& p, const Vec& x, const Vec& v, double h) {
  Vec xp = x, xm = x;
  axpy(h, v, xp);
  axpy(-h, v, xm);
  Vec gp(p.dim()), gm(p.dim());
  p.gradient(xp, gp);
  p.gradient(xm, gm);
  Vec out = sub(gp, gm);
  scale(1.0 / (2.0 * h), out);
  return out;
}

// Straightforward cross-entropy evaluation in extended precision, without
// the log-sum-exp rearrangement: the independent value oracle.
inline double naive_cross_entropy(const Dataset& ds, const Vec& x, double mu) {
  long double acc = 0.0L;
  for (std::size_t i = 0; i < ds.n_samples; ++i) {
    const double* row = ds.row(i);
    long double denom = 0.0L;
    std::vector<long double> expz(ds.n_classes);
    for (std::size_t j = 0; j < ds.n_classes; ++j) {
      long double z = 0.0L;
      for (std::size_t k = 0; k < ds.n_features; ++k)
        z += static_cast<long double>(row[k]) * static_cast<long double>(x[j * ds.n_features + k]);
      expz[j] = std::exp(z);
      denom += expz[j];
    }
    acc += -std::log(expz[static_cast<std::size_t>(ds.labels[i])] / denom);
  }
  long double ridge = 0.0L;
  for (double v : x) ridge += static_cast<long double>(v) * static_cast<long double>(v);
  return static_cast<double>(acc + mu * ridge);
}

inline Vec random_vec(SplitMix64& rng, std::size_t d, double scale = 1.0) {
  Vec v(d);
  for (double& e : v) e = scale * rng.gaussian();
  return v;
}

}  // namespace fncr::test
