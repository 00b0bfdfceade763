#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "cfjlas/measurement.hpp"
#include "cfjlas/polyroots.hpp"
#include "cfjlas/types.hpp"

namespace cfjlas {

// Differenced squared-measurement system A theta = y + G [lambda1, lambda2]^T.
struct LinearSystem {
  Eigen::MatrixXd A;  // (M-1) x (2K+2)
  Eigen::MatrixXd G;  // (M-1) x 2
  Eigen::VectorXd y;  // (M-1)
};

// Least-squares reduction theta = g + U [lambda1, lambda2]^T.
struct Reduction {
  Eigen::VectorXd g;  // (2K+2)
  Eigen::MatrixXd U;  // (2K+2) x 2
};

struct EstimationResult {
  UserState theta_refined;
  UserState theta_raw;
  double lambda1 = 0.0;  // selected omega^2 - |v|^2, m^2/s^2
  double lambda2 = 0.0;  // selected beta*omega - p.v, m^2/s
  int candidates_considered = 0;
  double selected_ssr = 0.0;
  double refinement_norm = 0.0;
};

struct SolverOptions {
  int reference_anchor = 0;            // index used for differencing
  double real_root_tol = 1e-9;         // real_filter tolerance
  double widened_real_root_tol = 1e-6; // retry tolerance when no real root
};

// Builds A, G, y by squaring each TOA equation and subtracting the reference
// anchor's row. Throws RankDeficient when the smallest singular value of A
// falls below 1e-10 times the largest.
LinearSystem build_linear_system(const Scenario& scenario,
                                 const MeasurementSet& meas,
                                 int reference_anchor = 0);

// Solves the two least-squares problems A g ~= y and A U ~= G through an
// orthogonal decomposition.
Reduction reduce(const LinearSystem& system);

// Quadratic forms evaluating the two intermediate variables:
// theta^T H1 theta = omega^2 - |v|^2, theta^T H2 theta = 2(beta*omega - p.v).
Eigen::MatrixXd lambda1_quadratic_form(int K);
Eigen::MatrixXd lambda2_quadratic_form(int K);

// The two quadratic equations the intermediate variables must satisfy.
std::pair<QuadraticCoefficients, QuadraticCoefficients> quadratic_coefficients(
    const Reduction& reduction, int K);

// Maps each root pair through theta = g + U [x, y]^T.
std::vector<UserState> candidate_states(const Reduction& reduction,
                                        const std::vector<RootPair>& pairs,
                                        int K);

// Index of the candidate with the smallest weighted residual sum of squares;
// ties go to the earliest candidate.
std::size_t select_root_index(const Scenario& scenario,
                              const MeasurementSet& meas,
                              const std::vector<UserState>& candidates,
                              double* selected_ssr = nullptr);

UserState select_root(const Scenario& scenario, const MeasurementSet& meas,
                      const std::vector<UserState>& candidates);

// One weighted Gauss-Newton correction of the raw estimate; returns the
// refined state and the increment norm. Throws SingularNormalMatrix when the
// reciprocal condition of J^T W J falls below 1e-15.
std::pair<UserState, double> wls_refine(const Scenario& scenario,
                                        const MeasurementSet& meas,
                                        const UserState& raw);

// Full closed-form pipeline: linearize, reduce, solve the quadratic pair,
// select the root, refine. Errors from any step carry the stage name.
EstimationResult estimate(const Scenario& scenario, const MeasurementSet& meas,
                          const SolverOptions& options = {});

// Reciprocal 1-norm condition estimate of a square matrix; optionally
// returns the inverse computed along the way. Non-finite inputs yield 0.
double rcond_1norm(const Eigen::MatrixXd& m,
                   Eigen::MatrixXd* inverse_out = nullptr);

}  // namespace cfjlas
