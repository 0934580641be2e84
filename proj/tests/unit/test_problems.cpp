#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "fncr/fixtures.hpp"
#include "fncr/problems.hpp"
#include "fncr/rng.hpp"
#include "support.hpp"

using namespace fncr;

namespace {

Dataset tiny_dataset() {
  // N=3, d=2, C=2 fixture used against the naive extended-precision evaluator.
  Dataset ds;
  ds.n_samples = 3;
  ds.n_features = 2;
  ds.n_classes = 2;
  ds.features = {0.5, -1.0, 1.5, 0.25, -0.75, 2.0};
  ds.labels = {0, 1, 1};
  ds.validate();
  return ds;
}

std::string temp_path(const char* name) {
  return std::string("fncr_test_") + name;
}

}  // namespace

TEST_CASE("cross-entropy value matches closed forms on degenerate data") {
  SUBCASE("one sample, two classes, zero features: ln 2 at any x") {
    Dataset ds;
    ds.n_samples = 1;
    ds.n_features = 3;
    ds.n_classes = 2;
    ds.features = {0.0, 0.0, 0.0};
    ds.labels = {0};
    ds.validate();
    CrossEntropyProblem ce(ds, 0.0);
    CHECK(ce.value(Vec{1.0, -2.0, 3.0, 0.5, 0.0, -1.0}) == doctest::Approx(std::log(2.0)));
  }

  SUBCASE("three classes with ridge: ln 3 + mu |x|^2") {
    Dataset ds;
    ds.n_samples = 1;
    ds.n_features = 1;
    ds.n_classes = 3;
    ds.features = {0.0};
    ds.labels = {2};
    ds.validate();
    CrossEntropyProblem ce(ds, 1.0);
    CHECK(ce.value(Vec{2.0, 0.0, 0.0}) == doctest::Approx(std::log(3.0) + 4.0));
  }
}

TEST_CASE("cross-entropy value matches a naive extended-precision evaluation") {
  const Dataset ds = tiny_dataset();
  CrossEntropyProblem ce(ds, 0.3);
  SplitMix64 rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const Vec x = test::random_vec(rng, ce.dim(), 2.0);
    const double naive = test::naive_cross_entropy(ds, x, 0.3);
    CHECK(ce.value(x) == doctest::Approx(naive).epsilon(1e-13));
  }
}

TEST_CASE("cross-entropy gradient and product special cases") {
  SUBCASE("zero features give a zero gradient for mu = 0") {
    Dataset ds;
    ds.n_samples = 2;
    ds.n_features = 2;
    ds.n_classes = 2;
    ds.features = {0.0, 0.0, 0.0, 0.0};
    ds.labels = {0, 1};
    ds.validate();
    CrossEntropyProblem ce(ds, 0.0);
    Vec g;
    ce.gradient(Vec{1.0, 2.0, 3.0, 4.0}, g);
    CHECK(norm2(g) == 0.0);
  }

  SUBCASE("product with the zero vector is zero") {
    CrossEntropyProblem ce(tiny_dataset(), 0.2);
    Vec hv;
    ce.hessian_vec(Vec(ce.dim(), 0.5), Vec(ce.dim(), 0.0), hv);
    CHECK(norm2(hv) == 0.0);
  }
}

TEST_CASE("derivatives agree with central finite differences") {
  const Dataset ds = make_synthetic(21, 50, 5, 3, 1.0);
  CrossEntropyProblem ce(ds, 0.1);
  CrossEntropyProblem ce_flat(ds, 0.0);
  QuadraticProblem quad = QuadraticProblem::random_spd(13, 10, 100.0);

  const Problem* problems[] = {&ce, &ce_flat, &quad};
  SplitMix64 rng(8);
  for (const Problem* p : problems) {
    const std::size_t d = p->dim();
    for (int pt = 0; pt < 50; ++pt) {
      const Vec x = test::random_vec(rng, d, 0.5);
      const Vec v = test::random_vec(rng, d);

      Vec g(d);
      p->gradient(x, g);
      const double dir = dot(g, v);
      const double fd = test::fd_directional(*p, x, v, 1e-6);
      CHECK(dir == doctest::Approx(fd).epsilon(1e-5));

      Vec hv(d);
      p->hessian_vec(x, v, hv);
      const Vec fd_h = test::fd_hvp(*p, x, v, 1e-5);
      const double scale = std::max({norm2(hv), norm2(fd_h), 1e-12});
      CHECK(norm2(sub(hv, fd_h)) / scale <= 1e-4);
    }
  }
}

TEST_CASE("ridge term keeps the Hessian above the strong-convexity floor") {
  const double mu = 0.15;
  const Dataset ds = make_synthetic(31, 40, 4, 2, 1.0);
  CrossEntropyProblem ce(ds, mu);
  SplitMix64 rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    const Vec x = test::random_vec(rng, ce.dim());
    const Vec v = test::random_vec(rng, ce.dim());
    Vec hv(ce.dim());
    ce.hessian_vec(x, v, hv);
    CHECK(dot(v, hv) >= 2.0 * mu * dot(v, v) - 1e-8);
  }
}

TEST_CASE("quadratic problem closed forms") {
  SUBCASE("identity matrix") {
    QuadraticProblem q({1.0, 0.0, 0.0, 1.0}, {0.0, 0.0});
    Vec g(2), hv(2);
    q.gradient({3.0, -4.0}, g);
    CHECK(g == Vec{3.0, -4.0});
    q.hessian_vec({0.0, 0.0}, {5.0, 6.0}, hv);
    CHECK(hv == Vec{5.0, 6.0});
  }

  SUBCASE("diag(1,2) with b=(1,1) solves to (1, 0.5)") {
    QuadraticProblem q({1.0, 0.0, 0.0, 2.0}, {1.0, 1.0});
    CHECK(q.known_solution()[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(q.known_solution()[1] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(q.value(q.known_solution()) == doctest::Approx(-0.5 * dot(q.rhs(), q.known_solution())));
    CHECK(q.lambda_min() == doctest::Approx(1.0));
    CHECK(q.lambda_max() == doctest::Approx(2.0));
  }

  SUBCASE("construction rejects asymmetric and indefinite matrices") {
    CHECK_THROWS_AS(QuadraticProblem({1.0, 0.5, 0.0, 1.0}, {0.0, 0.0}), ConfigError);
    CHECK_THROWS_AS(QuadraticProblem({1.0, 0.0, 0.0, -2.0}, {0.0, 0.0}), OperatorNotPdError);
  }

  SUBCASE("random_spd pins the condition number") {
    QuadraticProblem q = QuadraticProblem::random_spd(5, 12, 1e4);
    CHECK(q.lambda_min() == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(q.lambda_max() == doctest::Approx(1e4).epsilon(1e-8));
  }
}

TEST_CASE("libsvm loader handles the format definition") {
  const std::string path = temp_path("libsvm.txt");
  {
    std::ofstream out(path);
    out << "2 1:0.5 3:1.0\n";
    out << "1 2:2.0\n";
  }
  const Dataset ds = load_libsvm(path);
  CHECK(ds.n_samples == 2);
  CHECK(ds.n_features == 3);
  CHECK(ds.n_classes == 2);
  // Raw labels {2, 1} remap in sorted order to {1, 0}.
  CHECK(ds.labels[0] == 1);
  CHECK(ds.labels[1] == 0);
  CHECK(Vec(ds.row(0), ds.row(0) + 3) == Vec{0.5, 0.0, 1.0});
  CHECK(Vec(ds.row(1), ds.row(1) + 3) == Vec{0.0, 2.0, 0.0});
  std::remove(path.c_str());
}

TEST_CASE("libsvm errors carry line numbers; empty files are rejected") {
  const std::string path = temp_path("libsvm_bad.txt");
  {
    std::ofstream out(path);
    out << "1 1:0.5\n";
    out << "2 oops\n";
  }
  CHECK_THROWS_AS(load_libsvm(path), ParseError);
  try {
    load_libsvm(path);
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  {
    std::ofstream out(path);
  }
  CHECK_THROWS_AS(load_libsvm(path), EmptyDatasetError);
  std::remove(path.c_str());
}

TEST_CASE("csv loader takes the label from the last column") {
  const std::string path = temp_path("data.csv");
  {
    std::ofstream out(path);
    out << "0.1,0.2,1\n";
    out << "0.3,0.4,0\n";
  }
  const Dataset ds = load_csv(path);
  CHECK(ds.n_features == 2);
  CHECK(ds.labels[0] == 1);
  CHECK(ds.labels[1] == 0);
  CHECK(ds.features == std::vector<double>{0.1, 0.2, 0.3, 0.4});

  {
    std::ofstream out(path);
    out << "0.1,0.2,1\n";
    out << "0.3,0\n";
  }
  CHECK_THROWS_AS(load_csv(path), ParseError);
  std::remove(path.c_str());
}

TEST_CASE("libsvm save/load round trip preserves features exactly") {
  const Dataset ds = make_synthetic(77, 25, 6, 3, 2.0);
  const std::string path = temp_path("roundtrip.libsvm");
  save_libsvm(ds, path);
  const Dataset back = load_libsvm(path);
  REQUIRE(back.n_samples == ds.n_samples);
  REQUIRE(back.n_features == ds.n_features);
  CHECK(back.labels == ds.labels);
  CHECK(back.features == ds.features);
  std::remove(path.c_str());
}

TEST_CASE("synthetic generator is deterministic and matches the frozen fixture") {
  const Dataset a = make_synthetic(42, 500, 20, 2, 1.0);
  const Dataset b = make_synthetic(42, 500, 20, 2, 1.0);
  CHECK(a.features == b.features);
  CHECK(a.labels == b.labels);
  CHECK(dataset_checksum(a) == dataset_checksum(b));
  CHECK(dataset_checksum(a) == fixtures::kStronglyConvexDatasetChecksum);
  const Dataset c = make_synthetic(43, 500, 20, 2, 1.0);
  CHECK(dataset_checksum(c) != dataset_checksum(a));
}

TEST_CASE("zero separation collapses the class distributions") {
  const Dataset ds = make_synthetic(55, 2000, 6, 2, 0.0);
  // Both classes draw from the same blob; per-class feature means agree to
  // within a few standard errors.
  Vec mean0(6, 0.0), mean1(6, 0.0);
  std::size_t n0 = 0, n1 = 0;
  for (std::size_t i = 0; i < ds.n_samples; ++i) {
    Vec& m = ds.labels[i] == 0 ? mean0 : mean1;
    (ds.labels[i] == 0 ? n0 : n1) += 1;
    for (std::size_t j = 0; j < 6; ++j) m[j] += ds.row(i)[j];
  }
  scale(1.0 / static_cast<double>(n0), mean0);
  scale(1.0 / static_cast<double>(n1), mean1);
  const double stderr_scale = 1.0 / std::sqrt(6.0 * 1000.0);  // entries have variance 1/d
  CHECK(norm2(sub(mean0, mean1)) <= 6.0 * stderr_scale * std::sqrt(6.0));
}

TEST_CASE("spectrum estimation brackets the true extreme eigenvalues") {
  SUBCASE("diag(1,2)") {
    QuadraticProblem q({1.0, 0.0, 0.0, 2.0}, {0.0, 0.0});
    Oracle oracle(q);
    const SpectrumEstimate est = estimate_spectrum(oracle, Vec{0.0, 0.0});
    CHECK(est.lmax_est == doctest::Approx(2.0).epsilon(1e-4));
    CHECK(est.mu_est == doctest::Approx(1.0).epsilon(1e-4));
  }

  SUBCASE("identity collapses to (1, 1)") {
    test::UnitQuadratic prob(4);
    Oracle oracle(prob);
    const SpectrumEstimate est = estimate_spectrum(oracle, Vec(4, 0.0));
    CHECK(est.lmax_est == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(est.mu_est == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(est.converged);
  }

  SUBCASE("constant Hessian has a vanishing Lipschitz estimate") {
    QuadraticProblem q = QuadraticProblem::random_spd(3, 6, 10.0);
    Oracle oracle(q);
    CHECK(estimate_lh(oracle, Vec(6, 0.0), 1.0) <= 1e-8);
  }
}
