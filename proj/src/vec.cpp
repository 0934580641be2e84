#include "fncr/vec.hpp"

#include <cmath>

namespace fncr {

double dot(const Vec& a, const Vec& b) {
  require_same_dim(a, b);
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

double norm2(const Vec& v) {
  double acc = 0.0;
  for (double x : v) acc += x * x;
  return std::sqrt(acc);
}

void axpy(double a, const Vec& x, Vec& y) {
  require_same_dim(x, y);
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

void scale(double a, Vec& v) {
  for (double& x : v) x *= a;
}

Vec scaled(double a, const Vec& v) {
  Vec out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = a * v[i];
  return out;
}

Vec add(const Vec& a, const Vec& b) {
  require_same_dim(a, b);
  Vec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

Vec sub(const Vec& a, const Vec& b) {
  require_same_dim(a, b);
  Vec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

Vec negated(const Vec& v) {
  Vec out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = -v[i];
  return out;
}

std::optional<std::size_t> first_nonfinite(const Vec& v) {
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!std::isfinite(v[i])) return i;
  return std::nullopt;
}

void require_finite(const Vec& v, const std::string& what) {
  if (auto idx = first_nonfinite(v)) throw NonFiniteError(what, *idx);
}

void require_same_dim(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw DimensionMismatch(a.size(), b.size());
}

}  // namespace fncr
