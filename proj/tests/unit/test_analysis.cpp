#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <random>

#include "cfjlas/analysis.hpp"
#include "cfjlas/measurement.hpp"
#include "support/oracles.hpp"

using namespace cfjlas;

namespace {

// Finite-difference Hessian of the negative log-likelihood's quadratic form
//   f(theta) = 0.5 (h(theta0) - h(theta))^T W (h(theta0) - h(theta))
// evaluated at theta0, which the information matrix must match.
Eigen::MatrixXd fd_information(const Scenario& scenario,
                               const UserState& truth,
                               const NoiseModel& noise, double step) {
  const Eigen::VectorXd h0 = forward_toa(scenario, truth);
  const Eigen::VectorXd w = noise.sigmas.array().square().inverse().matrix();
  const int K = scenario.K;
  const int n = 2 * K + 2;
  const auto f = [&](const Eigen::VectorXd& theta) {
    const Eigen::VectorXd d =
        h0 - forward_toa(scenario, UserState::from_vector(theta, K));
    return 0.5 * (d.array().square() * w.array()).sum();
  };
  const Eigen::VectorXd theta0 = truth.to_vector();
  Eigen::MatrixXd H(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      Eigen::VectorXd pp = theta0, pm = theta0, mp = theta0, mm = theta0;
      pp(i) += step; pp(j) += step;
      pm(i) += step; pm(j) -= step;
      mp(i) -= step; mp(j) += step;
      mm(i) -= step; mm(j) -= step;
      H(i, j) = (f(pp) - f(pm) - f(mp) + f(mm)) / (4.0 * step * step);
    }
  }
  return H;
}

}  // namespace

TEST_CASE("fim structure") {
  std::mt19937_64 rng(131);
  for (int trial = 0; trial < 100; ++trial) {
    const int K = trial % 2 == 0 ? 2 : 3;
    const Scenario scenario = testsupport::random_scenario(rng, K);
    const UserState truth = testsupport::random_state(rng, K);
    const NoiseModel noise = NoiseModel::uniform(scenario.anchor_count(), 1.0);
    const Eigen::MatrixXd F = fim(scenario, truth, noise);
    CHECK((F - F.transpose()).lpNorm<Eigen::Infinity>() < 1e-12);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(F);
    CHECK(eig.eigenvalues().minCoeff() > -1e-9);
  }
}

TEST_CASE("fim scales inversely with the noise variance") {
  std::mt19937_64 rng(137);
  const Scenario scenario = testsupport::random_scenario(rng, 2);
  const UserState truth = testsupport::random_state(rng, 2);
  const NoiseModel noise = NoiseModel::uniform(scenario.anchor_count(), 1.0);
  NoiseModel doubled = noise;
  doubled.sigmas *= 2.0;
  const Eigen::MatrixXd F1 = fim(scenario, truth, noise);
  const Eigen::MatrixXd F2 = fim(scenario, truth, doubled);
  CHECK((F2 * 4.0 - F1).lpNorm<Eigen::Infinity>() <
        1e-9 * F1.lpNorm<Eigen::Infinity>());
  const Eigen::MatrixXd C1 = crlb(F1);
  const Eigen::MatrixXd C2 = crlb(F2);
  CHECK((C2 - 4.0 * C1).lpNorm<Eigen::Infinity>() <
        1e-7 * C2.lpNorm<Eigen::Infinity>());
}

TEST_CASE("fim matches the finite-difference information") {
  std::mt19937_64 rng(139);
  const Scenario scenario = testsupport::random_scenario(rng, 2);
  const UserState truth = testsupport::random_state(rng, 2);
  const NoiseModel noise = NoiseModel::uniform(scenario.anchor_count(), 1.0);
  const Eigen::MatrixXd F = fim(scenario, truth, noise);
  const Eigen::MatrixXd F_fd = fd_information(scenario, truth, noise, 1e-1);
  CHECK((F - F_fd).lpNorm<Eigen::Infinity>() <
        1e-4 * F.lpNorm<Eigen::Infinity>());
}

TEST_CASE("fim rejects non-positive sigma") {
  std::mt19937_64 rng(149);
  const Scenario scenario = testsupport::random_scenario(rng, 2);
  const UserState truth = testsupport::random_state(rng, 2);
  NoiseModel noise = NoiseModel::uniform(scenario.anchor_count(), 1.0);
  noise.sigmas(2) = 0.0;
  CHECK_THROWS_AS(fim(scenario, truth, noise), InvalidInput);
}

TEST_CASE("crlb") {
  SUBCASE("identity information") {
    const Eigen::MatrixXd C = crlb(Eigen::MatrixXd::Identity(6, 6));
    CHECK((C - Eigen::MatrixXd::Identity(6, 6)).lpNorm<Eigen::Infinity>() <
          1e-12);
  }
  SUBCASE("inverse relation") {
    std::mt19937_64 rng(151);
    const Scenario scenario = testsupport::random_scenario(rng, 2);
    const UserState truth = testsupport::random_state(rng, 2);
    const NoiseModel noise = NoiseModel::uniform(scenario.anchor_count(), 1.0);
    const Eigen::MatrixXd F = fim(scenario, truth, noise);
    const Eigen::MatrixXd C = crlb(F);
    CHECK((C * F - Eigen::MatrixXd::Identity(6, 6)).lpNorm<Eigen::Infinity>() <
          1e-8);
  }
  SUBCASE("singular information is rejected with a diagnostic") {
    Eigen::MatrixXd F = Eigen::MatrixXd::Zero(6, 6);
    F(0, 0) = 1.0;
    try {
      crlb(F);
      FAIL("expected SingularFim");
    } catch (const SingularFim& e) {
      CHECK(std::string(e.what()).find("rcond") != std::string::npos);
    }
  }
}

TEST_CASE("partition_crlb") {
  Eigen::VectorXd diag(6);
  diag << 1.0, 1.0, 2.0, 2.0, 3.0, 4.0;
  Eigen::MatrixXd C = diag.asDiagonal();
  const CrlbPartition part = partition_crlb(C, 2);
  CHECK(part.pos_bound == 2.0);
  CHECK(part.vel_bound == 4.0);
  CHECK(part.beta_bound == 3.0);
  CHECK(part.omega_bound == 4.0);

  // off-diagonal entries are ignored
  C(0, 5) = 17.0;
  C(5, 0) = 17.0;
  const CrlbPartition same = partition_crlb(C, 2);
  CHECK(same.pos_bound == part.pos_bound);
  CHECK(same.omega_bound == part.omega_bound);

  CHECK_THROWS_AS(partition_crlb(C, 3), DimensionMismatch);
}

TEST_CASE("mse_metrics") {
  UserState truth;
  truth.p = Eigen::Vector2d(1.0, 2.0);
  truth.v = Eigen::Vector2d(0.5, -0.5);
  truth.beta = 10.0;
  truth.omega = -3.0;
  SUBCASE("zero for perfect estimates") {
    const MseRecord rec = mse_metrics({truth, truth}, {truth, truth});
    CHECK(rec.mse_p == 0.0);
    CHECK(rec.mse_v == 0.0);
    CHECK(rec.mse_beta == 0.0);
    CHECK(rec.mse_omega == 0.0);
    CHECK(rec.run_count == 2);
  }
  SUBCASE("single run squared norm") {
    UserState est = truth;
    est.p += Eigen::Vector2d(3.0, 4.0);
    const MseRecord rec = mse_metrics({truth}, {est});
    CHECK(rec.mse_p == doctest::Approx(25.0));
  }
  SUBCASE("length mismatch") {
    CHECK_THROWS_AS(mse_metrics({truth}, {truth, truth}), DimensionMismatch);
  }
  SUBCASE("concentrates on the error covariance trace") {
    std::mt19937_64 rng(157);
    std::normal_distribution<double> n1(0.0, 1.0), n2(0.0, 2.0);
    std::vector<UserState> truths, estimates;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
      truths.push_back(truth);
      UserState est = truth;
      est.p(0) += n1(rng);
      est.p(1) += n2(rng);
      estimates.push_back(est);
    }
    const MseRecord rec = mse_metrics(truths, estimates);
    CHECK(rec.mse_p == doctest::Approx(5.0).epsilon(0.05));
  }
}

TEST_CASE("correctness_rate") {
  SUBCASE("all correct") {
    CHECK(correctness_rate({0.0, 0.0, 0.0}, 1.0) == 1.0);
  }
  SUBCASE("all incorrect with the default factor") {
    CHECK(correctness_rate({10.0, 10.0}, 1.0) == 0.0);
  }
  SUBCASE("boundary is exclusive") {
    CHECK(correctness_rate({9.0}, 1.0) == 0.0);
    CHECK(correctness_rate({8.9999}, 1.0) == 1.0);
  }
  SUBCASE("positive bound required") {
    CHECK_THROWS_AS(correctness_rate({1.0}, 0.0), InvalidInput);
  }
}

TEST_CASE("flop models") {
  CHECK(flops_cfjlas(2, 8) == 3689);
  CHECK(flops_iterative_per_iteration(2, 8) == 1240);
  CHECK(flops_iterative(2, 8, 1) == 1240);
  CHECK(flops_iterative(2, 8, 3) == 3720);
  CHECK(flops_iterative(2, 8, 0) == 0);
  CHECK(3 * flops_iterative_per_iteration(2, 8) > flops_cfjlas(2, 8));

  // direct evaluation of the closed-form model at K=3, M=9:
  // 32*27 + 16*9*9 + 104*9 + 62*27 + 148*3 + 65*9 + 697
  const long long expected =
      32 * 27 + 16 * 9 * 9 + 104 * 9 + 62 * 27 + 148 * 3 + 65 * 9 + 697;
  CHECK(flops_cfjlas(3, 9) == expected);

  // nondecreasing in the anchor count
  long long prev = 0;
  for (int M = 7; M <= 30; ++M) {
    const long long d = flops_cfjlas(2, M);
    CHECK(d >= prev);
    prev = d;
  }

  CHECK_THROWS_AS(flops_cfjlas(4, 10), InvalidInput);
  CHECK_THROWS_AS(flops_cfjlas(2, 5), InvalidInput);
  CHECK_THROWS_AS(flops_iterative(2, 8, -1), InvalidInput);
}
