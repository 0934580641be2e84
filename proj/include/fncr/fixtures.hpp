#pragma once

#include <cstdint>

#include "fncr/harness.hpp"

namespace fncr {
namespace fixtures {

/// Strongly convex benchmark fixture: synthetic blobs N=500, d=20, C=2,
/// separation 1, data seed 42, ridge mu = 0.1; initial iterate uniform [0,1)
/// with seed 42. Solver settings are the caller's.
ExperimentSpec strongly_convex();

/// Convex over-parameterized fixture: N=50, d=200, C=2, separation 1, data
/// seed 7, mu = 0 (dimension 400 > N, so the Hessian alone is singular).
ExperimentSpec overparameterized();

/// Frozen checksum of the strongly convex fixture's dataset
/// (dataset_checksum over make_synthetic(42, 500, 20, 2, 1.0)).
inline constexpr std::uint64_t kStronglyConvexDatasetChecksum = 0xbdde1364ed20910ULL;  // frozen by tools/freeze_fixtures

/// Reference optimum of the strongly convex fixture, produced by
/// compute_f_star on it (gradient tolerance 1e-12, budget 1e7 units).
inline constexpr double kStronglyConvexFStar = 6.6094454653865089;  // frozen by tools/freeze_fixtures

}  // namespace fixtures
}  // namespace fncr
