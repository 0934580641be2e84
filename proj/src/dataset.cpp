#include "fncr/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

#include "fncr/rng.hpp"

namespace fncr {

void Dataset::validate() const {
  if (n_samples < 1) throw Error("dataset must have at least one sample");
  if (n_features < 1) throw Error("dataset must have at least one feature");
  if (n_classes < 2) throw Error("dataset must have at least two classes");
  if (features.size() != n_samples * n_features)
    throw Error("feature matrix size does not match n_samples * n_features");
  if (labels.size() != n_samples) throw Error("label count does not match n_samples");
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] < 0 || static_cast<std::size_t>(labels[i]) >= n_classes)
      throw Error("label out of range at sample " + std::to_string(i));
  for (std::size_t i = 0; i < features.size(); ++i)
    if (!std::isfinite(features[i]))
      throw NonFiniteError("dataset features", i);
}

namespace {

// Remaps raw labels (as parsed) to contiguous [0, C) in sorted order.
std::vector<int> remap_labels(const std::vector<double>& raw) {
  std::map<double, int> index;
  for (double v : raw) index.emplace(v, 0);
  int next = 0;
  for (auto& kv : index) kv.second = next++;
  std::vector<int> out(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) out[i] = index.at(raw[i]);
  return out;
}

bool blank_or_comment(const std::string& line) {
  for (char ch : line) {
    if (ch == '#') return true;
    if (!std::isspace(static_cast<unsigned char>(ch))) return false;
  }
  return true;
}

}  // namespace

Dataset load_libsvm(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);

  struct Entry {
    std::size_t col;
    double value;
  };
  std::vector<double> raw_labels;
  std::vector<std::vector<Entry>> rows;
  std::size_t max_col = 0;

  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (blank_or_comment(line)) continue;
    std::istringstream ls(line);
    double label;
    if (!(ls >> label)) throw ParseError(path, lineno, "expected a numeric label");
    raw_labels.push_back(label);
    rows.emplace_back();
    std::string tok;
    while (ls >> tok) {
      const auto colon = tok.find(':');
      if (colon == std::string::npos)
        throw ParseError(path, lineno, "expected index:value, got '" + tok + "'");
      long idx;
      double val;
      try {
        idx = std::stol(tok.substr(0, colon));
        val = std::stod(tok.substr(colon + 1));
      } catch (const std::exception&) {
        throw ParseError(path, lineno, "malformed index:value pair '" + tok + "'");
      }
      if (idx < 1) throw ParseError(path, lineno, "feature indices are 1-based");
      const std::size_t col = static_cast<std::size_t>(idx - 1);
      max_col = std::max(max_col, col + 1);
      rows.back().push_back({col, val});
    }
  }
  if (rows.empty()) throw EmptyDatasetError(path);
  if (max_col == 0) throw ParseError(path, lineno, "no features found");

  Dataset ds;
  ds.n_samples = rows.size();
  ds.n_features = max_col;
  ds.labels = remap_labels(raw_labels);
  ds.n_classes = static_cast<std::size_t>(*std::max_element(ds.labels.begin(), ds.labels.end())) + 1;
  ds.features.assign(ds.n_samples * ds.n_features, 0.0);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (const auto& e : rows[i]) ds.features[i * ds.n_features + e.col] = e.value;
  ds.validate();
  return ds;
}

void save_libsvm(const Dataset& ds, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path + " for writing");
  char buf[64];
  for (std::size_t i = 0; i < ds.n_samples; ++i) {
    out << ds.labels[i];
    const double* row = ds.row(i);
    for (std::size_t j = 0; j < ds.n_features; ++j) {
      if (row[j] == 0.0) continue;
      std::snprintf(buf, sizeof(buf), "%.17g", row[j]);
      out << ' ' << (j + 1) << ':' << buf;
    }
    out << '\n';
  }
  if (!out) throw Error("write failed for " + path);
}

Dataset load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);

  std::vector<double> raw_labels;
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (blank_or_comment(line)) continue;
    std::vector<double> vals;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) {
      try {
        vals.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw ParseError(path, lineno, "not a number: '" + cell + "'");
      }
    }
    if (vals.size() < 2)
      throw ParseError(path, lineno, "need at least one feature column plus the label");
    if (!rows.empty() && vals.size() != rows.front().size() + 1)
      throw ParseError(path, lineno, "inconsistent column count");
    raw_labels.push_back(vals.back());
    vals.pop_back();
    rows.push_back(std::move(vals));
  }
  if (rows.empty()) throw EmptyDatasetError(path);

  Dataset ds;
  ds.n_samples = rows.size();
  ds.n_features = rows.front().size();
  ds.labels = remap_labels(raw_labels);
  ds.n_classes = static_cast<std::size_t>(*std::max_element(ds.labels.begin(), ds.labels.end())) + 1;
  ds.features.reserve(ds.n_samples * ds.n_features);
  for (const auto& r : rows) ds.features.insert(ds.features.end(), r.begin(), r.end());
  ds.validate();
  return ds;
}

Dataset make_synthetic(std::uint64_t seed, std::size_t n, std::size_t d, std::size_t c,
                       double separation) {
  if (n < 1 || d < 1 || c < 2) throw ConfigError("make_synthetic requires n >= 1, d >= 1, c >= 2");
  if (separation < 0.0) throw ConfigError("make_synthetic requires separation >= 0");
  SplitMix64 rng(seed);
  std::vector<double> means(c * d);
  for (double& m : means) m = separation * rng.gaussian();

  Dataset ds;
  ds.n_samples = n;
  ds.n_features = d;
  ds.n_classes = c;
  ds.features.resize(n * d);
  ds.labels.resize(n);
  const double inv_sqrt_d = 1.0 / std::sqrt(static_cast<double>(d));
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t label = i % c;
    ds.labels[i] = static_cast<int>(label);
    double* row = ds.features.data() + i * d;
    const double* mean = means.data() + label * d;
    for (std::size_t j = 0; j < d; ++j) row[j] = (mean[j] + rng.gaussian()) * inv_sqrt_d;
  }
  ds.validate();
  return ds;
}

std::uint64_t dataset_checksum(const Dataset& ds) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](const void* data, std::size_t bytes) {
    const unsigned char* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < bytes; ++i) {
      h ^= p[i];
      h *= 0x100000001b3ULL;
    }
  };
  mix(ds.features.data(), ds.features.size() * sizeof(double));
  mix(ds.labels.data(), ds.labels.size() * sizeof(int));
  std::uint64_t dims[3] = {ds.n_samples, ds.n_features, ds.n_classes};
  mix(dims, sizeof(dims));
  return h;
}

}  // namespace fncr
