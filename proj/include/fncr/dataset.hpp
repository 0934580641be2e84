#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fncr/vec.hpp"

namespace fncr {

class ParseError : public Error {
 public:
  ParseError(const std::string& path, std::size_t line, const std::string& message)
      : Error(path + ":" + std::to_string(line) + ": " + message), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class EmptyDatasetError : public Error {
 public:
  explicit EmptyDatasetError(const std::string& path) : Error(path + ": empty dataset") {}
};

/// Row-major dense feature matrix with contiguous integer labels in [0, C).
struct Dataset {
  std::vector<double> features;  // n_samples * n_features, row-major
  std::vector<int> labels;
  std::size_t n_samples = 0;
  std::size_t n_features = 0;
  std::size_t n_classes = 0;

  const double* row(std::size_t i) const { return features.data() + i * n_features; }

  /// Enforces N >= 1, d >= 1, C >= 2, labels in range, finite features.
  void validate() const;
};

/// LIBSVM text format: "<label> <index>:<value> ...", 1-based indices,
/// blank-separated. Feature indices are converted to 0-based dense columns
/// and raw labels are remapped to contiguous [0, C) in sorted order.
Dataset load_libsvm(const std::string& path);

/// Writes in the same format; values use 17 significant digits so a
/// load/save round trip preserves features exactly. Zeros are skipped, as is
/// conventional for the format.
void save_libsvm(const Dataset& ds, const std::string& path);

/// Comma-separated rows with the class label in the last column. Labels are
/// remapped to contiguous [0, C) in sorted order.
Dataset load_csv(const std::string& path);

/// Deterministic Gaussian class blobs from SplitMix64. Sample i gets label
/// i mod C and features (m_c + z)/sqrt(d) with z ~ N(0, I_d) and class mean
/// m_c = separation * u_c, u_c ~ N(0, I_d); the 1/sqrt(d) scaling keeps
/// E|a|^2 = 1 + separation^2 regardless of dimension. separation = 0 makes
/// every class share one distribution.
Dataset make_synthetic(std::uint64_t seed, std::size_t n, std::size_t d, std::size_t c,
                       double separation);

/// FNV-1a over the raw feature/label bytes; used to freeze fixtures.
std::uint64_t dataset_checksum(const Dataset& ds);

}  // namespace fncr
