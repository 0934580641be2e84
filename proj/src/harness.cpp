#include "fncr/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "fncr/rng.hpp"
#include "fncr/suites.hpp"

namespace fncr {

const char* to_string(SolverKind k) {
  switch (k) {
    case SolverKind::FncrLs: return "fncr_ls";
    case SolverKind::FncrRegLs: return "fncr_reg_ls";
    case SolverKind::NewtonCg: return "newton_cg";
    case SolverKind::Gd: return "gd";
  }
  return "?";
}

namespace {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct KvMap {
  std::map<std::string, std::string> values;

  void set(const std::string& key, const std::string& value) { values[key] = value; }
  bool has(const std::string& key) const { return values.count(key) != 0; }

  std::string take_string(const std::string& key, std::string fallback) {
    auto it = values.find(key);
    if (it == values.end()) return fallback;
    std::string v = it->second;
    values.erase(it);
    return v;
  }

  double take_double(const std::string& key, double fallback) {
    auto it = values.find(key);
    if (it == values.end()) return fallback;
    try {
      const double v = std::stod(it->second);
      values.erase(it);
      return v;
    } catch (const std::exception&) {
      throw ConfigError("value of '" + key + "' is not a number: " + it->second);
    }
  }

  long long take_int(const std::string& key, long long fallback) {
    auto it = values.find(key);
    if (it == values.end()) return fallback;
    try {
      const long long v = std::stoll(it->second);
      values.erase(it);
      return v;
    } catch (const std::exception&) {
      throw ConfigError("value of '" + key + "' is not an integer: " + it->second);
    }
  }

  std::uint64_t take_u64(const std::string& key, std::uint64_t fallback) {
    auto it = values.find(key);
    if (it == values.end()) return fallback;
    try {
      const std::uint64_t v = std::stoull(it->second);
      values.erase(it);
      return v;
    } catch (const std::exception&) {
      throw ConfigError("value of '" + key + "' is not an unsigned integer: " + it->second);
    }
  }
};

void insert_pair(KvMap& kv, const std::string& text, const std::string& where) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError(where + ": expected key=value, got '" + text + "'");
  std::string key = text.substr(0, eq);
  std::string value = text.substr(eq + 1);
  auto trim = [](std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    s = (b == std::string::npos) ? std::string() : s.substr(b, e - b + 1);
  };
  trim(key);
  trim(value);
  if (key.empty()) throw ConfigError(where + ": empty key");
  kv.set(key, value);
}

ExperimentSpec materialize(KvMap kv) {
  ExperimentSpec spec;

  const std::string solver = kv.take_string("solver", "fncr_ls");
  if (solver == "fncr_ls") spec.solver = SolverKind::FncrLs;
  else if (solver == "fncr_reg_ls") spec.solver = SolverKind::FncrRegLs;
  else if (solver == "newton_cg") spec.solver = SolverKind::NewtonCg;
  else if (solver == "gd") spec.solver = SolverKind::Gd;
  else throw ConfigError("unknown solver '" + solver + "'");

  const std::string problem = kv.take_string("problem", "");
  if (problem.empty()) throw ConfigError("missing problem (problem=quadratic|cross_entropy)");
  if (problem == "quadratic") spec.problem.kind = ProblemSpec::Kind::Quadratic;
  else if (problem == "cross_entropy") spec.problem.kind = ProblemSpec::Kind::CrossEntropy;
  else throw ConfigError("unknown problem '" + problem + "'");

  spec.problem.quadratic.seed = kv.take_u64("quad_seed", spec.problem.quadratic.seed);
  spec.problem.quadratic.d = static_cast<int>(kv.take_int("quad_d", spec.problem.quadratic.d));
  spec.problem.quadratic.cond = kv.take_double("quad_cond", spec.problem.quadratic.cond);

  const std::string data = kv.take_string("data", "");
  if (!data.empty()) spec.problem.dataset_path = data;
  spec.problem.dataset_format = kv.take_string("data_format", "auto");
  if (spec.problem.dataset_format != "auto" && spec.problem.dataset_format != "libsvm" &&
      spec.problem.dataset_format != "csv")
    throw ConfigError("data_format must be auto, libsvm, or csv");
  spec.problem.synthetic.seed = kv.take_u64("synth_seed", spec.problem.synthetic.seed);
  spec.problem.synthetic.n = static_cast<int>(kv.take_int("synth_n", spec.problem.synthetic.n));
  spec.problem.synthetic.d = static_cast<int>(kv.take_int("synth_d", spec.problem.synthetic.d));
  spec.problem.synthetic.c = static_cast<int>(kv.take_int("synth_c", spec.problem.synthetic.c));
  spec.problem.synthetic.separation =
      kv.take_double("synth_sep", spec.problem.synthetic.separation);
  spec.problem.mu = kv.take_double("mu", spec.problem.mu);

  spec.output_path = kv.take_string("out", spec.output_path);
  spec.seed = kv.take_u64("seed", spec.seed);
  const std::string x0 = kv.take_string("x0", "uniform01");
  if (x0 == "uniform01") spec.x0_scheme = X0Scheme::Uniform01;
  else if (x0 == "zeros") spec.x0_scheme = X0Scheme::Zeros;
  else throw ConfigError("x0 must be uniform01 or zeros");
  if (kv.has("f_star")) spec.f_star = kv.take_double("f_star", 0.0);

  SolverConfig& c = spec.config;
  // Solver-dependent defaults, overridable by explicit keys.
  if (spec.solver == SolverKind::FncrRegLs) c.sigma = 0.01;
  if (spec.solver == SolverKind::NewtonCg) c.omega = 0.1;
  if (spec.solver == SolverKind::Gd) c.eta0 = 0.01;

  c.rho = kv.take_double("rho", c.rho);
  c.omega = kv.take_double("omega", c.omega);
  c.T = static_cast<int>(kv.take_int("T", c.T));
  c.T_max = static_cast<int>(kv.take_int("T_max", c.T_max));
  c.zeta = kv.take_double("zeta", c.zeta);
  c.eta0 = kv.take_double("eta0", c.eta0);
  c.sigma = kv.take_double("sigma", c.sigma);
  c.theta = kv.take_double("theta", c.theta);
  c.grad_tol = kv.take_double("grad_tol", c.grad_tol);
  c.oracle_budget = kv.take_int("oracle_budget", c.oracle_budget);
  c.max_outer = static_cast<int>(kv.take_int("max_outer", c.max_outer));
  c.check_window = static_cast<int>(kv.take_int("check_window", c.check_window));
  c.ls_rho = kv.take_double("ls_rho", c.ls_rho);
  c.superlinear_schedule = kv.take_int("superlinear_schedule", 0) != 0;
  c.kappa_hint = kv.take_double("kappa_hint", c.kappa_hint);

  if (!kv.values.empty()) throw ConfigError("unknown key '" + kv.values.begin()->first + "'");

  c.validate();
  if (spec.problem.kind == ProblemSpec::Kind::Quadratic && spec.problem.quadratic.d < 1)
    throw ConfigError("quad_d must be >= 1");
  if (spec.problem.kind == ProblemSpec::Kind::Quadratic && spec.problem.quadratic.cond < 1.0)
    throw ConfigError("quad_cond must be >= 1");
  if (spec.problem.mu < 0.0) throw ConfigError("mu must be >= 0");
  return spec;
}

}  // namespace

ExperimentSpec parse_config(const std::string& path, const std::vector<std::string>& overrides) {
  KvMap kv;
  if (!path.empty()) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line = line.substr(0, hash);
      const auto b = line.find_first_not_of(" \t\r");
      if (b == std::string::npos) continue;
      insert_pair(kv, line, path + ":" + std::to_string(lineno));
    }
  }
  for (const auto& ov : overrides) insert_pair(kv, ov, "override");
  return materialize(std::move(kv));
}

ExperimentSpec parse_config(const std::vector<std::string>& overrides) {
  return parse_config(std::string(), overrides);
}

std::unique_ptr<Problem> build_problem(const ProblemSpec& spec) {
  if (spec.kind == ProblemSpec::Kind::Quadratic) {
    return std::make_unique<QuadraticProblem>(QuadraticProblem::random_spd(
        spec.quadratic.seed, static_cast<std::size_t>(spec.quadratic.d), spec.quadratic.cond));
  }
  Dataset ds;
  if (spec.dataset_path) {
    const std::string& path = *spec.dataset_path;
    std::string fmt = spec.dataset_format;
    if (fmt == "auto")
      fmt = path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0 ? "csv" : "libsvm";
    ds = fmt == "csv" ? load_csv(path) : load_libsvm(path);
  } else {
    ds = make_synthetic(spec.synthetic.seed, static_cast<std::size_t>(spec.synthetic.n),
                        static_cast<std::size_t>(spec.synthetic.d),
                        static_cast<std::size_t>(spec.synthetic.c), spec.synthetic.separation);
  }
  return std::make_unique<CrossEntropyProblem>(std::move(ds), spec.mu);
}

Vec init_x0(std::size_t dim, std::uint64_t seed, X0Scheme scheme) {
  if (dim < 1) throw ConfigError("init_x0 needs dim >= 1");
  Vec x(dim, 0.0);
  if (scheme == X0Scheme::Uniform01) {
    SplitMix64 rng(seed);
    for (double& v : x) v = rng.uniform01();
  }
  return x;
}

std::string trace_to_csv(const std::vector<TraceRecord>& trace) {
  std::ostringstream out;
  out << "k,f,gnorm,delta,oracle_units,wall_ns,dtype,eta,inner_t,ls_backtracks\n";
  for (const auto& rec : trace) {
    out << rec.k << ',' << format_double(rec.f) << ',' << format_double(rec.gnorm) << ',';
    if (rec.delta) out << format_double(*rec.delta);
    out << ',' << rec.oracle_units << ',' << rec.wall_ns << ','
        << (rec.dtype ? to_string(*rec.dtype) : "n/a") << ',' << format_double(rec.eta) << ','
        << rec.inner_t << ',' << rec.ls_backtracks << '\n';
  }
  return out.str();
}

void emit_csv(const std::vector<TraceRecord>& trace, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path + " for writing");
  out << trace_to_csv(trace);
  if (!out) throw Error("write failed for " + path);
}

std::vector<TraceRecord> parse_trace_csv(const std::string& csv_text) {
  std::istringstream in(csv_text);
  std::string line;
  if (!std::getline(in, line)) throw Error("trace CSV is empty");
  std::vector<TraceRecord> trace;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (cells.size() < 10) throw Error("trace CSV row has " + std::to_string(cells.size()) + " cells");
    TraceRecord rec;
    rec.k = std::stoi(cells[0]);
    rec.f = std::stod(cells[1]);
    rec.gnorm = std::stod(cells[2]);
    if (!cells[3].empty()) rec.delta = std::stod(cells[3]);
    rec.oracle_units = std::stoll(cells[4]);
    rec.wall_ns = std::stoll(cells[5]);
    if (cells[6] == "SUF") rec.dtype = DirectionType::Suf;
    else if (cells[6] == "INS") rec.dtype = DirectionType::Ins;
    else if (cells[6] == "TER") rec.dtype = DirectionType::Ter;
    rec.eta = std::stod(cells[7]);
    rec.inner_t = std::stoi(cells[8]);
    rec.ls_backtracks = std::stoi(cells[9]);
    trace.push_back(rec);
  }
  return trace;
}

bool traces_equal_modulo_wall(const std::string& csv_a, const std::string& csv_b) {
  auto mask_wall = [](const std::string& text) {
    std::istringstream in(text);
    std::ostringstream out;
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
      if (header) {
        out << line << '\n';
        header = false;
        continue;
      }
      std::vector<std::string> cells;
      std::stringstream ls(line);
      std::string cell;
      while (std::getline(ls, cell, ',')) cells.push_back(cell);
      if (cells.size() >= 6) cells[5] = "*";
      for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
      out << '\n';
    }
    return out.str();
  };
  return mask_wall(csv_a) == mask_wall(csv_b);
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  spec.config.validate();
  std::unique_ptr<Problem> problem = build_problem(spec.problem);
  Oracle oracle(*problem);
  Vec x0 = init_x0(problem->dim(), spec.seed, spec.x0_scheme);

  SolveResult solve;
  switch (spec.solver) {
    case SolverKind::FncrLs:
    case SolverKind::FncrRegLs:
      solve = fncr_ls(oracle, std::move(x0), spec.config, spec.f_star);
      break;
    case SolverKind::NewtonCg:
      solve = newton_cg_ls(oracle, std::move(x0), spec.config, spec.f_star);
      break;
    case SolverKind::Gd:
      solve = gd_ls(oracle, std::move(x0), spec.config, spec.f_star);
      break;
  }

  if (!spec.output_path.empty()) emit_csv(solve.trace, spec.output_path);

  std::ostringstream summary;
  summary << "status=" << to_string(solve.status) << " f=" << format_double(solve.f_final)
          << " gnorm=" << format_double(solve.gnorm_final) << " units=" << solve.units_final
          << " iters=" << solve.iterations << " ins=" << solve.ins_count;
  if (!solve.message.empty()) summary << " message=\"" << solve.message << "\"";

  ExperimentResult res;
  res.summary = summary.str();
  switch (solve.status) {
    case SolveStatus::Converged: res.exit_code = 0; break;
    case SolveStatus::BudgetExhausted:
    case SolveStatus::MaxOuterReached: res.exit_code = 2; break;
    case SolveStatus::LineSearchFailed:
    case SolveStatus::SolverError: res.exit_code = 3; break;
  }
  res.solve = std::move(solve);
  return res;
}

double compute_f_star(const ExperimentSpec& spec) {
  std::unique_ptr<Problem> problem = build_problem(spec.problem);
  Oracle oracle(*problem);
  Vec x0 = init_x0(problem->dim(), spec.seed, spec.x0_scheme);

  const bool strongly_convex =
      spec.problem.kind == ProblemSpec::Kind::Quadratic || spec.problem.mu > 0.0;

  SolverConfig cfg;  // benchmark defaults, tightened
  cfg.grad_tol = strongly_convex ? 1e-12 : 1e-9;
  cfg.oracle_budget = 10000000;
  cfg.max_outer = 1000000;
  // Keep the inner operator definite on merely convex problems.
  cfg.sigma = strongly_convex ? 0.0 : 0.01;

  const SolveResult res = fncr_ls(oracle, std::move(x0), cfg);
  if (res.status == SolveStatus::Converged) return res.f_final;
  // A failed line search at a tiny gradient means the objective has gone
  // flat at double precision: no step's reduction is representable, so the
  // iterate already carries the best f the format can certify.
  if (res.status == SolveStatus::LineSearchFailed && res.gnorm_final <= 1e-5)
    return res.f_final;
  throw Error(std::string("reference optimum run did not converge: ") + to_string(res.status) +
              (res.message.empty() ? "" : " (" + res.message + ")"));
}

int run_suite(const std::string& name, std::ostream& out) {
  SuiteOutcome total;
  auto absorb = [&total](const SuiteOutcome& o) {
    total.failures += o.failures;
    total.checks += o.checks;
  };
  if (name == "cr_properties") absorb(suite_cr_properties(out));
  else if (name == "lemma_bounds") absorb(suite_lemma_bounds(out));
  else if (name == "rate_checks") absorb(suite_rate_checks(out));
  else if (name == "all") {
    absorb(suite_cr_properties(out));
    absorb(suite_lemma_bounds(out));
    absorb(suite_rate_checks(out));
  } else {
    throw ConfigError("unknown suite '" + name +
                      "' (expected cr_properties, lemma_bounds, rate_checks, or all)");
  }
  out << "suite " << name << ": " << (total.checks - total.failures) << "/" << total.checks
      << " checks passed\n";
  return total.failures == 0 ? 0 : 1;
}

}  // namespace fncr
