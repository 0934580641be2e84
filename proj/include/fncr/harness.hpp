#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fncr/problems.hpp"
#include "fncr/solvers.hpp"

namespace fncr {

enum class SolverKind { FncrLs, FncrRegLs, NewtonCg, Gd };
enum class X0Scheme { Uniform01, Zeros };

const char* to_string(SolverKind k);

struct QuadraticSpec {
  std::uint64_t seed = 1;
  int d = 20;
  double cond = 100.0;
};

struct SyntheticSpec {
  std::uint64_t seed = 42;
  int n = 500;
  int d = 20;
  int c = 2;
  double separation = 1.0;
};

struct ProblemSpec {
  enum class Kind { Quadratic, CrossEntropy };
  Kind kind = Kind::CrossEntropy;
  QuadraticSpec quadratic;
  // Cross-entropy data source: a file (LIBSVM or CSV by extension/setting)
  // or the synthetic generator.
  std::optional<std::string> dataset_path;
  std::string dataset_format = "auto";  // auto | libsvm | csv
  SyntheticSpec synthetic;
  double mu = 0.1;
};

/// One experiment, fully deterministic: spec plus code version fixes the
/// trace byte-for-byte (wall-clock column aside).
struct ExperimentSpec {
  ProblemSpec problem;
  SolverKind solver = SolverKind::FncrLs;
  SolverConfig config;
  std::string output_path = "trace.csv";
  std::uint64_t seed = 42;  // initial-iterate seed
  X0Scheme x0_scheme = X0Scheme::Uniform01;
  std::optional<double> f_star;  // enables the delta column
};

/// Key=value configuration, one pair per line, '#' comments; `overrides`
/// (same key=value syntax) win over file entries. Solver-dependent defaults
/// are applied last: sigma = 0.01 for fncr_reg_ls, omega = 0.1 for
/// newton_cg, eta0 = 0.01 for gd, each only when not set explicitly.
/// Unknown keys, out-of-range values, and a missing problem raise
/// ConfigError.
ExperimentSpec parse_config(const std::string& path, const std::vector<std::string>& overrides);

/// Parses overrides only (no file).
ExperimentSpec parse_config(const std::vector<std::string>& overrides);

std::unique_ptr<Problem> build_problem(const ProblemSpec& spec);

/// Deterministic initial iterate: entries from SplitMix64 uniform [0, 1), or
/// zeros.
Vec init_x0(std::size_t dim, std::uint64_t seed, X0Scheme scheme);

/// CSV schema: header
///   k,f,gnorm,delta,oracle_units,wall_ns,dtype,eta,inner_t,ls_backtracks
/// with floats at 17 significant digits (round-trip exact), delta blank when
/// no reference optimum is known, dtype one of SUF|INS|TER|n/a.
void emit_csv(const std::vector<TraceRecord>& trace, const std::string& path);
std::string trace_to_csv(const std::vector<TraceRecord>& trace);
std::vector<TraceRecord> parse_trace_csv(const std::string& csv_text);

/// Byte comparison of two trace CSVs with the wall_ns column masked out.
bool traces_equal_modulo_wall(const std::string& csv_a, const std::string& csv_b);

struct ExperimentResult {
  SolveResult solve;
  std::string summary;  // one line: status, final f, final |g|, units, iterations, INS count
  int exit_code = 0;    // 0 converged, 2 budget exhausted, 3 solver error
};

/// Builds the problem, runs the solver, writes the trace CSV (unless
/// output_path is empty), and returns the summary.
ExperimentResult run_experiment(const ExperimentSpec& spec);

/// Reference optimum by a tight run: gradient tolerance 1e-12 (1e-9 for
/// mu = 0 cross-entropy, which is convex but not strongly so), budget 1e7
/// units. Gradient regularization is enabled for mu = 0 problems so the inner
/// operator stays definite.
double compute_f_star(const ExperimentSpec& spec);

/// Registered property suites: cr_properties, lemma_bounds, rate_checks, or
/// all. Prints one line per check; returns 0 iff everything passed.
int run_suite(const std::string& name, std::ostream& out);

}  // namespace fncr
