#include <cstdio>

#include "fncr/dataset.hpp"
#include "fncr/fixtures.hpp"
#include "fncr/harness.hpp"

// Regenerates the frozen fixture constants in include/fncr/fixtures.hpp.
// Run after any change to the synthetic generator or the solver defaults and
// paste the printed values.
int main() {
  const fncr::Dataset ds = fncr::make_synthetic(42, 500, 20, 2, 1.0);
  std::printf("kStronglyConvexDatasetChecksum = 0x%llxULL\n",
              static_cast<unsigned long long>(fncr::dataset_checksum(ds)));

  const double f_star = fncr::compute_f_star(fncr::fixtures::strongly_convex());
  std::printf("kStronglyConvexFStar = %.17g\n", f_star);
  return 0;
}
