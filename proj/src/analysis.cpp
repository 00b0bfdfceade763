#include "cfjlas/analysis.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <sstream>

#include "cfjlas/measurement.hpp"
#include "cfjlas/solver.hpp"

namespace cfjlas {

Eigen::MatrixXd fim(const Scenario& scenario, const UserState& truth,
                    const NoiseModel& noise) {
  if (noise.sigmas.size() != scenario.anchor_count()) {
    throw DimensionMismatch("fim: noise model length mismatch");
  }
  if ((noise.sigmas.array() <= 0.0).any()) {
    throw InvalidInput("fim: every sigma must be positive");
  }
  const Eigen::MatrixXd J = design_matrix(scenario, truth);
  const Eigen::VectorXd w = noise.sigmas.array().square().inverse().matrix();
  Eigen::MatrixXd F = J.transpose() * w.asDiagonal() * J;
  F = 0.5 * (F + F.transpose());  // exact symmetry
  return F;
}

Eigen::MatrixXd crlb(const Eigen::MatrixXd& fim) {
  if (fim.rows() != fim.cols()) {
    throw DimensionMismatch("crlb: matrix must be square");
  }
  Eigen::MatrixXd inv;
  const double rcond = rcond_1norm(fim, &inv);
  if (!(rcond > 1e-12)) {
    std::ostringstream msg;
    msg << "crlb: Fisher information near singular (rcond=" << rcond << ")";
    throw SingularFim(msg.str());
  }
  return 0.5 * (inv + inv.transpose());
}

CrlbPartition partition_crlb(const Eigen::MatrixXd& crlb, int K) {
  const int n = 2 * K + 2;
  if (crlb.rows() != n || crlb.cols() != n) {
    std::ostringstream msg;
    msg << "partition_crlb: matrix is " << crlb.rows() << "x" << crlb.cols()
        << ", expected " << n << "x" << n;
    throw DimensionMismatch(msg.str());
  }
  CrlbPartition part;
  part.pos_bound = crlb.diagonal().head(K).sum();
  part.vel_bound = crlb.diagonal().segment(K, K).sum();
  part.beta_bound = crlb(2 * K, 2 * K);
  part.omega_bound = crlb(2 * K + 1, 2 * K + 1);
  return part;
}

MseRecord mse_metrics(const std::vector<UserState>& truths,
                      const std::vector<UserState>& estimates) {
  if (truths.size() != estimates.size() || truths.empty()) {
    std::ostringstream msg;
    msg << "mse_metrics: " << truths.size() << " truths vs "
        << estimates.size() << " estimates";
    throw DimensionMismatch(msg.str());
  }
  MseRecord rec;
  rec.run_count = static_cast<int>(truths.size());
  for (std::size_t i = 0; i < truths.size(); ++i) {
    rec.mse_p += (truths[i].p - estimates[i].p).squaredNorm();
    rec.mse_v += (truths[i].v - estimates[i].v).squaredNorm();
    const double db = truths[i].beta - estimates[i].beta;
    const double dw = truths[i].omega - estimates[i].omega;
    rec.mse_beta += db * db;
    rec.mse_omega += dw * dw;
  }
  rec.mse_p /= rec.run_count;
  rec.mse_v /= rec.run_count;
  rec.mse_beta /= rec.run_count;
  rec.mse_omega /= rec.run_count;
  return rec;
}

double correctness_rate(const std::vector<double>& position_sq_errors,
                        double pos_bound, double factor) {
  if (!(pos_bound > 0.0)) {
    throw InvalidInput("correctness_rate: pos_bound must be positive");
  }
  if (position_sq_errors.empty()) return 0.0;
  const double threshold = factor * pos_bound;
  std::size_t correct = 0;
  for (double e : position_sq_errors) {
    if (e < threshold) ++correct;
  }
  return static_cast<double>(correct) /
         static_cast<double>(position_sq_errors.size());
}

namespace {

void check_flops_args(int K, int M) {
  if (K != 2 && K != 3) throw InvalidInput("flops: K must be 2 or 3");
  if (M < minimum_anchor_count(K)) {
    throw InvalidInput("flops: M below the minimum anchor count");
  }
}

}  // namespace

long long flops_cfjlas(int K, int M) {
  check_flops_args(K, M);
  const long long k = K;
  const long long m = M;
  return 32 * k * k * k + 16 * k * k * m + 104 * k * k + 62 * k * m + 148 * k +
         65 * m + 697;
}

long long flops_iterative_per_iteration(int K, int M) {
  check_flops_args(K, M);
  const long long k = K;
  const long long m = M;
  return 16 * k * k * k + 8 * k * k * m + 56 * k * k + 22 * k * m + 64 * k +
         16 * m + 24;
}

long long flops_iterative(int K, int M, int iterations) {
  if (iterations < 0) throw InvalidInput("flops: iterations must be >= 0");
  return static_cast<long long>(iterations) *
         flops_iterative_per_iteration(K, M);
}

}  // namespace cfjlas
