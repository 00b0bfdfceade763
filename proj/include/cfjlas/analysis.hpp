#pragma once

#include <vector>

#include "cfjlas/types.hpp"

namespace cfjlas {

// Diagonal-block sums of a CRLB matrix: position, velocity, clock offset,
// clock skew.
struct CrlbPartition {
  double pos_bound = 0.0;    // m^2
  double vel_bound = 0.0;    // (m/s)^2
  double beta_bound = 0.0;   // m^2
  double omega_bound = 0.0;  // (m/s)^2
};

struct MseRecord {
  double mse_p = 0.0;      // m^2
  double mse_v = 0.0;      // (m/s)^2
  double mse_beta = 0.0;   // m^2
  double mse_omega = 0.0;  // (m/s)^2
  int run_count = 0;
};

// Fisher information J^T W J evaluated at the true state. Requires every
// sigma positive.
Eigen::MatrixXd fim(const Scenario& scenario, const UserState& truth,
                    const NoiseModel& noise);

// Inverse of the Fisher information. Throws SingularFim when the reciprocal
// condition estimate falls below 1e-12.
Eigen::MatrixXd crlb(const Eigen::MatrixXd& fim);

CrlbPartition partition_crlb(const Eigen::MatrixXd& crlb, int K);

MseRecord mse_metrics(const std::vector<UserState>& truths,
                      const std::vector<UserState>& estimates);

// Fraction of squared position errors under factor * pos_bound.
double correctness_rate(const std::vector<double>& position_sq_errors,
                        double pos_bound, double factor = 9.0);

// Flop-count models. The closed-form estimator costs a constant D; the
// baseline costs L per iteration.
long long flops_cfjlas(int K, int M);
long long flops_iterative(int K, int M, int iterations);
long long flops_iterative_per_iteration(int K, int M);

}  // namespace cfjlas
