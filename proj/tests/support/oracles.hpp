// Test-only oracles, independent of the library's solution paths:
// companion-matrix eigenvalue roots, finite-difference Jacobians, and
// random problem generators.
#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <array>
#include <complex>
#include <random>
#include <vector>

#include "cfjlas/measurement.hpp"
#include "cfjlas/types.hpp"

namespace testsupport {

// Eigenvalues of the companion matrix of a4 x^4 + ... + a0.
inline std::vector<std::complex<double>> companion_quartic_roots(
    double a4, double a3, double a2, double a1, double a0) {
  Eigen::Matrix4d companion = Eigen::Matrix4d::Zero();
  companion(0, 0) = -a3 / a4;
  companion(0, 1) = -a2 / a4;
  companion(0, 2) = -a1 / a4;
  companion(0, 3) = -a0 / a4;
  companion(1, 0) = 1.0;
  companion(2, 1) = 1.0;
  companion(3, 2) = 1.0;
  const Eigen::EigenSolver<Eigen::Matrix4d> solver(companion, false);
  std::vector<std::complex<double>> roots;
  for (int i = 0; i < 4; ++i) roots.push_back(solver.eigenvalues()(i));
  return roots;
}

// Smallest achievable maximum pairwise distance over all assignments of
// `a` onto `b` (both must have the same small size).
inline double nearest_assignment_distance(
    std::vector<std::complex<double>> a,
    const std::vector<std::complex<double>>& b) {
  std::vector<std::size_t> perm(a.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  double best = std::numeric_limits<double>::infinity();
  do {
    double worst = 0.0;
    for (std::size_t i = 0; i < perm.size(); ++i) {
      worst = std::max(worst, std::abs(a[i] - b[perm[i]]));
    }
    best = std::min(best, worst);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

// Central-difference Jacobian of the forward TOA model.
inline Eigen::MatrixXd finite_difference_jacobian(
    const cfjlas::Scenario& scenario, const cfjlas::UserState& state,
    double step = 1e-4) {
  const int K = scenario.K;
  const int n = 2 * K + 2;
  const Eigen::VectorXd theta0 = state.to_vector();
  Eigen::MatrixXd J(scenario.anchor_count(), n);
  for (int j = 0; j < n; ++j) {
    Eigen::VectorXd plus = theta0;
    Eigen::VectorXd minus = theta0;
    plus(j) += step;
    minus(j) -= step;
    const Eigen::VectorXd fp =
        cfjlas::forward_toa(scenario, cfjlas::UserState::from_vector(plus, K));
    const Eigen::VectorXd fm =
        cfjlas::forward_toa(scenario, cfjlas::UserState::from_vector(minus, K));
    J.col(j) = (fp - fm) / (2.0 * step);
  }
  return J;
}

// Random well-posed scenario: anchors spread in a box with increasing slot
// times, K in {2, 3}.
inline cfjlas::Scenario random_scenario(std::mt19937_64& rng, int K,
                                        int extra_anchors = 1) {
  std::uniform_real_distribution<double> coord(-100.0, 100.0);
  std::uniform_real_distribution<double> gap(0.002, 0.008);
  cfjlas::Scenario scenario;
  scenario.K = K;
  const int M = cfjlas::minimum_anchor_count(K) + extra_anchors;
  double t = 0.0;
  for (int i = 0; i < M; ++i) {
    cfjlas::AnchorNode anchor;
    anchor.id = i + 1;
    anchor.position = Eigen::VectorXd::NullaryExpr(
        K, [&](Eigen::Index) { return coord(rng); });
    anchor.clock_offset = 0.0;
    anchor.slot_time = t;
    t += gap(rng);
    scenario.anchors.push_back(std::move(anchor));
  }
  return cfjlas::validate_scenario(std::move(scenario));
}

// Random user state with the magnitudes the estimator is designed around:
// clock offset up to a few km (tens of microseconds times c) and skew up to
// a few km/s (tens of ppm times c).
inline cfjlas::UserState random_state(std::mt19937_64& rng, int K) {
  std::uniform_real_distribution<double> pos(-50.0, 50.0);
  std::uniform_real_distribution<double> vel(-10.0, 10.0);
  std::uniform_real_distribution<double> beta(-3000.0, 3000.0);
  std::uniform_real_distribution<double> omega(-6000.0, 6000.0);
  cfjlas::UserState state;
  state.p = Eigen::VectorXd::NullaryExpr(K, [&](Eigen::Index) { return pos(rng); });
  state.v = Eigen::VectorXd::NullaryExpr(K, [&](Eigen::Index) { return vel(rng); });
  state.beta = beta(rng);
  state.omega = omega(rng);
  return state;
}

}  // namespace testsupport
