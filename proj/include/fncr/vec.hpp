#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fncr {

/// Dense 64-bit float vector. All reductions over Vec in this library use a
/// fixed sequential summation order so repeated runs are bit-identical.
using Vec = std::vector<double>;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  DimensionMismatch(std::size_t a, std::size_t b)
      : Error("dimension mismatch: " + std::to_string(a) + " vs " + std::to_string(b)) {}
};

/// First offending index is preserved for diagnostics.
class NonFiniteError : public Error {
 public:
  NonFiniteError(const std::string& what, std::size_t index)
      : Error(what + ": non-finite entry at index " + std::to_string(index)), index_(index) {}
  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

class ZeroGradientError : public Error {
 public:
  ZeroGradientError() : Error("zero gradient passed to inner solver") {}
};

class OperatorNotPdError : public Error {
 public:
  using Error::Error;
};

class BreakdownError : public Error {
 public:
  using Error::Error;
};

class LineSearchFailure : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

double dot(const Vec& a, const Vec& b);
double norm2(const Vec& v);

/// y <- a*x + y
void axpy(double a, const Vec& x, Vec& y);
void scale(double a, Vec& v);
Vec scaled(double a, const Vec& v);
Vec add(const Vec& a, const Vec& b);
Vec sub(const Vec& a, const Vec& b);
Vec negated(const Vec& v);

/// Index of the first NaN/Inf entry, or nullopt if all entries are finite.
std::optional<std::size_t> first_nonfinite(const Vec& v);

/// Throws NonFiniteError naming `what` if any entry is NaN/Inf.
void require_finite(const Vec& v, const std::string& what);

void require_same_dim(const Vec& a, const Vec& b);

}  // namespace fncr
