#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "cusign/errors.hpp"
#include "cusign/linalg.hpp"
#include "cusign/lti.hpp"
#include "cusign/rng.hpp"
#include "helpers.hpp"

using namespace cusign;

TEST_CASE("Rng uniform matches the documented engine pipeline") {
  Rng rng(123);
  std::mt19937_64 reference(123);
  for (int i = 0; i < 100; ++i) {
    const double expected =
        static_cast<double>(reference() >> 11) * 0x1.0p-53;
    CHECK(rng.uniform() == expected);
  }
}

TEST_CASE("Rng determinism, spawning and spare caching") {
  Rng a(42);
  Rng b(42);
  for (int i = 0; i < 50; ++i) CHECK(a.normal() == b.normal());

  // Substreams depend only on the original seed, not on consumption.
  Rng parent1(7);
  Rng parent2(7);
  parent2.uniform();
  parent2.normal();
  Rng c1 = parent1.spawn(3);
  Rng c2 = parent2.spawn(3);
  for (int i = 0; i < 20; ++i) CHECK(c1.uniform() == c2.uniform());

  // Distinct streams decorrelate.
  Rng d1 = parent1.spawn(0);
  Rng d2 = parent1.spawn(1);
  CHECK(d1.uniform() != d2.uniform());

  CHECK_THROWS_AS(a.chi_square(0), InvalidArgumentError);
}

TEST_CASE("Rng normal moments are sane at desk scale") {
  Rng rng(2718);
  std::vector<double> xs(200000);
  for (double& x : xs) x = rng.normal();
  const auto m = oracle::two_pass_moments(xs);
  CHECK(std::fabs(m.mean) < 0.01);
  CHECK(std::fabs(m.var_population - 1.0) < 0.02);
}

TEST_CASE("linalg predicates and factorizations") {
  Mat s(2, 2);
  s << 2.0, 0.3, 0.3, 1.0;
  CHECK(is_symmetric(s));
  Mat ns = s;
  ns(0, 1) = 0.4;
  CHECK_FALSE(is_symmetric(ns));

  CHECK_NOTHROW(require_covariance(s, "S"));
  CHECK_THROWS_AS(require_covariance(ns, "S"), Error);
  Mat indef(2, 2);
  indef << 1.0, 2.0, 2.0, 1.0;  // eigenvalues 3 and -1
  CHECK_THROWS_AS(require_covariance(indef, "S"), NotPsdError);
  Mat rect(2, 3);
  rect.setZero();
  CHECK_THROWS_AS(require_covariance(rect, "S"), InvalidArgumentError);

  const Mat h = mat_sqrt_sym(s);
  CHECK(is_symmetric(h));
  CHECK(((h * h) - s).cwiseAbs().maxCoeff() < 1e-8);
  CHECK_THROWS_AS(mat_sqrt_sym(indef), NotPsdError);

  const Mat l = chol_factor(s);
  CHECK(((l * l.transpose()) - s).cwiseAbs().maxCoeff() < 1e-12);
  const Mat zf = chol_factor(Mat::Zero(3, 3));
  CHECK(zf.cwiseAbs().maxCoeff() == 0.0);
  // Semidefinite: rank-1 outer product factors after jitter.
  Mat rank1(2, 2);
  rank1 << 1.0, 1.0, 1.0, 1.0;
  const Mat lf = chol_factor(rank1);
  CHECK(((lf * lf.transpose()) - rank1).cwiseAbs().maxCoeff() < 1e-5);
  CHECK_THROWS_AS(chol_factor(indef), NotPsdError);

  Rng rng(8);
  const Vec noise = draw_noise(l, rng);
  CHECK(noise.size() == 2);
}

TEST_CASE("SystemModel::create validates shapes and covariances") {
  const Mat a = Mat::Identity(2, 2);
  const Mat b = Mat::Ones(2, 1);
  const Mat c = Mat::Identity(2, 2);
  const Mat q = 0.1 * Mat::Identity(2, 2);
  const Mat r = 0.2 * Mat::Identity(2, 2);
  const SystemModel m = SystemModel::create(a, b, c, q, r);
  CHECK(m.n == 2);
  CHECK(m.m == 1);
  CHECK(m.s == 2);
  CHECK(m.chol_q.rows() == 2);

  CHECK_THROWS_AS(SystemModel::create(Mat::Ones(2, 3), b, c, q, r), DimensionError);
  CHECK_THROWS_AS(SystemModel::create(a, Mat::Ones(3, 1), c, q, r), DimensionError);
  CHECK_THROWS_AS(SystemModel::create(a, b, Mat::Ones(2, 3), q, r), DimensionError);
  CHECK_THROWS_AS(SystemModel::create(a, b, c, Mat::Ones(3, 3), r), DimensionError);
  Mat indef(2, 2);
  indef << 1.0, 2.0, 2.0, 1.0;
  CHECK_THROWS_AS(SystemModel::create(a, b, c, indef, r), NotPsdError);
}

TEST_CASE("solve_steady_state matches the scalar closed form") {
  // 1-D system: a = 0.9, c = 1, q = 0.3, r = 0.5.
  const double a = 0.9, c = 1.0, q = 0.3, r = 0.5;
  Mat am(1, 1), bm(1, 1), cm(1, 1), qm(1, 1), rm(1, 1);
  am << a;
  bm << 1.0;
  cm << c;
  qm << q;
  rm << r;
  const SystemModel model = SystemModel::create(am, bm, cm, qm, rm);
  const EstimatorState est = solve_steady_state(model);

  const double p = oracle::scalar_dare(a, c, q, r);
  CHECK(est.P(0, 0) == doctest::Approx(p).epsilon(1e-10));
  CHECK(est.Sigma(0, 0) == doctest::Approx(c * c * p + r).epsilon(1e-10));
  CHECK(est.SigmaInv(0, 0) == doctest::Approx(1.0 / (c * c * p + r)).epsilon(1e-10));
  CHECK(est.SigmaHalf(0, 0) == doctest::Approx(std::sqrt(c * c * p + r)).epsilon(1e-10));
  CHECK(est.L(0, 0) == doctest::Approx(a * p * c / (c * c * p + r)).epsilon(1e-10));
  CHECK(est.xhat.size() == 1);
  CHECK(est.xhat(0) == 0.0);
}

TEST_CASE("solve_steady_state requires positive-definite measurement noise") {
  Mat am(1, 1), bm(1, 1), cm(1, 1), qm(1, 1), rm(1, 1);
  am << 0.9;
  bm << 1.0;
  cm << 1.0;
  qm << 0.3;
  rm << 0.0;
  const SystemModel model = SystemModel::create(am, bm, cm, qm, rm);
  CHECK_THROWS_AS(solve_steady_state(model), InvalidArgumentError);
}

TEST_CASE("kf_step returns the residual then advances the estimate") {
  Mat am(1, 1), bm(1, 1), cm(1, 1), qm(1, 1), rm(1, 1);
  am << 0.9;
  bm << 2.0;
  cm << 1.0;
  qm << 0.3;
  rm << 0.5;
  const SystemModel model = SystemModel::create(am, bm, cm, qm, rm);
  EstimatorState est = solve_steady_state(model);
  est.xhat(0) = 1.0;

  Vec u(1), y(1);
  u << 0.5;
  y << 2.0;
  const Vec res = kf_step(est, model, u, y);
  CHECK(res(0) == doctest::Approx(1.0).epsilon(1e-15));  // y - C xhat = 2 - 1
  const double l = est.L(0, 0);
  CHECK(est.xhat(0) == doctest::Approx(0.9 * 1.0 + 2.0 * 0.5 + l * 1.0).epsilon(1e-12));
}

TEST_CASE("simulate_step: noise order is process first, then measurement") {
  Mat am(1, 1), bm(1, 1), cm(1, 1), qm(1, 1), rm(1, 1);
  am << 1.0;
  bm << 0.0;
  cm << 1.0;
  qm << 4.0;  // factor 2
  rm << 9.0;  // factor 3
  const SystemModel model = SystemModel::create(am, bm, cm, qm, rm);

  Vec x(1), u(1), xi(1);
  x << 1.0;
  u << 0.0;
  xi << 0.25;
  Rng rng(77);
  const auto [x_next, y] = simulate_step(model, x, u, xi, rng);

  Rng replay(77);
  const double nu = 2.0 * replay.normal();
  const double eta = 3.0 * replay.normal();
  CHECK(x_next(0) == doctest::Approx(1.0 + nu).epsilon(1e-15));
  CHECK(y(0) == doctest::Approx(1.0 + eta + 0.25).epsilon(1e-15));
}

TEST_CASE("zero process noise propagates deterministically") {
  Mat am(1, 1), bm(1, 1), cm(1, 1), qm(1, 1), rm(1, 1);
  am << 0.5;
  bm << 1.0;
  cm << 1.0;
  qm << 0.0;
  rm << 1.0;
  const SystemModel model = SystemModel::create(am, bm, cm, qm, rm);
  Vec x(1), u(1), xi(1);
  x << 2.0;
  u << 1.0;
  xi << 0.0;
  Rng rng(3);
  const auto [x_next, y] = simulate_step(model, x, u, xi, rng);
  CHECK(x_next(0) == doctest::Approx(2.0).epsilon(1e-15));  // 0.5*2 + 1, no noise
  (void)y;
}

TEST_CASE("steady-state innovation whitening yields chi-square test measures") {
  // Run the filter on its own model; the whitened quadratic form should have
  // mean near s = 1 under no attack.
  Mat am(1, 1), bm(1, 1), cm(1, 1), qm(1, 1), rm(1, 1);
  am << 0.9;
  bm << 0.0;
  cm << 1.0;
  qm << 0.3;
  rm << 0.5;
  const SystemModel model = SystemModel::create(am, bm, cm, qm, rm);
  EstimatorState est = solve_steady_state(model);

  Rng rng(11);
  Vec x = Vec::Zero(1);
  Vec u = Vec::Zero(1);
  Vec xi = Vec::Zero(1);
  double sum_z = 0.0;
  const int n = 100000;
  const int warmup = 200;
  int counted = 0;
  for (int i = 0; i < n; ++i) {
    const auto [x_next, y] = simulate_step(model, x, u, xi, rng);
    const Vec r = kf_step(est, model, u, y);
    if (i >= warmup) {
      sum_z += r.dot(est.SigmaInv * r);
      ++counted;
    }
    x = x_next;
  }
  CHECK(std::fabs(sum_z / counted - 1.0) < 0.03);
}
