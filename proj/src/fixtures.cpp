#include "fncr/fixtures.hpp"

namespace fncr {
namespace fixtures {

ExperimentSpec strongly_convex() {
  ExperimentSpec spec;
  spec.problem.kind = ProblemSpec::Kind::CrossEntropy;
  spec.problem.synthetic = SyntheticSpec{42, 500, 20, 2, 1.0};
  spec.problem.mu = 0.1;
  spec.seed = 42;
  spec.x0_scheme = X0Scheme::Uniform01;
  spec.output_path.clear();
  return spec;
}

ExperimentSpec overparameterized() {
  ExperimentSpec spec;
  spec.problem.kind = ProblemSpec::Kind::CrossEntropy;
  spec.problem.synthetic = SyntheticSpec{7, 50, 200, 2, 1.0};
  spec.problem.mu = 0.0;
  spec.seed = 42;
  spec.x0_scheme = X0Scheme::Uniform01;
  spec.output_path.clear();
  return spec;
}

}  // namespace fixtures
}  // namespace fncr
