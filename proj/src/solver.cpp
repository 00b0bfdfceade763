#include "cfjlas/solver.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <sstream>

namespace cfjlas {

namespace {

// Reciprocal 1-norm condition of the R factor of a QR decomposition; the
// inverse costs a handful of triangular solves at these sizes. Agrees with
// the singular-value ratio up to a factor of the dimension.
double upper_triangular_rcond(const Eigen::MatrixXd& r_factor) {
  if (!r_factor.allFinite()) return 0.0;
  const int n = static_cast<int>(r_factor.cols());
  for (int i = 0; i < n; ++i) {
    if (r_factor(i, i) == 0.0) return 0.0;
  }
  const double norm = r_factor.cwiseAbs().colwise().sum().maxCoeff();
  const Eigen::MatrixXd inv = r_factor.triangularView<Eigen::Upper>().solve(
      Eigen::MatrixXd::Identity(n, n));
  if (!inv.allFinite()) return 0.0;
  const double inv_norm = inv.cwiseAbs().colwise().sum().maxCoeff();
  if (norm == 0.0 || inv_norm == 0.0) return 0.0;
  return 1.0 / (norm * inv_norm);
}

}  // namespace

double rcond_1norm(const Eigen::MatrixXd& m, Eigen::MatrixXd* inverse_out) {
  if (!m.allFinite()) return 0.0;
  const double norm = m.cwiseAbs().colwise().sum().maxCoeff();
  if (norm == 0.0) return 0.0;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(m);
  const Eigen::MatrixXd inv = lu.inverse();
  if (!inv.allFinite()) return 0.0;
  if (inverse_out != nullptr) *inverse_out = inv;
  const double inv_norm = inv.cwiseAbs().colwise().sum().maxCoeff();
  if (inv_norm == 0.0) return 0.0;
  return 1.0 / (norm * inv_norm);
}

LinearSystem build_linear_system(const Scenario& scenario,
                                 const MeasurementSet& meas,
                                 int reference_anchor) {
  const int M = scenario.anchor_count();
  const int K = scenario.K;
  if (meas.taus.size() != M) {
    std::ostringstream msg;
    msg << "measurement vector has length " << meas.taus.size() << " for " << M
        << " anchors";
    throw DimensionMismatch(msg.str());
  }
  if (!meas.taus.allFinite()) {
    throw InvalidInput("build_linear_system: non-finite measurement");
  }
  if (M < minimum_anchor_count(K)) {
    std::ostringstream msg;
    msg << "need at least " << minimum_anchor_count(K) << " anchors, got " << M;
    throw TooFewAnchors(msg.str());
  }
  if (reference_anchor < 0 || reference_anchor >= M) {
    throw InvalidInput("build_linear_system: reference anchor out of range");
  }

  // alpha_i folds the known anchor clock offset into the measurement.
  Eigen::VectorXd alpha(M);
  for (int i = 0; i < M; ++i) {
    alpha(i) = meas.taus(i) + scenario.anchors[i].clock_offset;
  }

  const AnchorNode& ref = scenario.anchors[reference_anchor];
  const double t_ref = ref.slot_time;
  const double alpha_ref = alpha(reference_anchor);
  const double ref_sq = ref.position.squaredNorm();

  LinearSystem sys;
  sys.A.resize(M - 1, 2 * K + 2);
  sys.G.resize(M - 1, 2);
  sys.y.resize(M - 1);
  int row = 0;
  for (int i = 0; i < M; ++i) {
    if (i == reference_anchor) continue;
    const AnchorNode& a = scenario.anchors[i];
    const double t = a.slot_time;
    sys.A.row(row).head(K) = 2.0 * (a.position - ref.position).transpose();
    sys.A.row(row).segment(K, K) =
        2.0 * (t * a.position - t_ref * ref.position).transpose();
    sys.A(row, 2 * K) = 2.0 * (alpha_ref - alpha(i));
    sys.A(row, 2 * K + 1) = 2.0 * (t_ref * alpha_ref - t * alpha(i));
    sys.G(row, 0) = t_ref * t_ref - t * t;
    sys.G(row, 1) = 2.0 * (t_ref - t);
    sys.y(row) = a.position.squaredNorm() - ref_sq -
                 (alpha(i) * alpha(i) - alpha_ref * alpha_ref);
    ++row;
  }

  const int n = 2 * K + 2;
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(sys.A);
  const Eigen::MatrixXd r_factor =
      qr.matrixQR().topRows(n).triangularView<Eigen::Upper>();
  const double rcond = upper_triangular_rcond(r_factor);
  if (!(rcond > 1e-10)) {
    std::ostringstream msg;
    msg << "system matrix rank deficient (rcond=" << rcond << ")";
    throw RankDeficient(msg.str());
  }
  return sys;
}

Reduction reduce(const LinearSystem& system) {
  if (system.A.rows() != system.G.rows() ||
      system.A.rows() != system.y.size()) {
    throw DimensionMismatch("reduce: inconsistent row counts in A, G, y");
  }
  const int n = static_cast<int>(system.A.cols());
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(system.A);
  const Eigen::MatrixXd r_factor =
      qr.matrixQR().topRows(n).triangularView<Eigen::Upper>();
  if (!(upper_triangular_rcond(r_factor) > 1e-10)) {
    throw RankDeficient("reduce: A lost full column rank");
  }
  Reduction red;
  red.g = qr.solve(system.y);
  red.U = qr.solve(system.G);
  return red;
}

Eigen::MatrixXd lambda1_quadratic_form(int K) {
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(2 * K + 2, 2 * K + 2);
  H.block(K, K, K, K) = -Eigen::MatrixXd::Identity(K, K);
  H(2 * K + 1, 2 * K + 1) = 1.0;
  return H;
}

Eigen::MatrixXd lambda2_quadratic_form(int K) {
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(2 * K + 2, 2 * K + 2);
  H.block(0, K, K, K) = -Eigen::MatrixXd::Identity(K, K);
  H.block(K, 0, K, K) = -Eigen::MatrixXd::Identity(K, K);
  H(2 * K, 2 * K + 1) = 1.0;
  H(2 * K + 1, 2 * K) = 1.0;
  return H;
}

namespace {

// theta^T H1 theta' without forming H1: omega*omega' - v.v'.
double lambda1_bilinear(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                        int K) {
  return a(2 * K + 1) * b(2 * K + 1) - a.segment(K, K).dot(b.segment(K, K));
}

// theta^T H2 theta' without forming H2:
// beta*omega' + omega*beta' - p.v' - v.p'.
double lambda2_bilinear(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                        int K) {
  return a(2 * K) * b(2 * K + 1) + a(2 * K + 1) * b(2 * K) -
         a.head(K).dot(b.segment(K, K)) - a.segment(K, K).dot(b.head(K));
}

}  // namespace

std::pair<QuadraticCoefficients, QuadraticCoefficients> quadratic_coefficients(
    const Reduction& reduction, int K) {
  const int n = 2 * K + 2;
  if (reduction.g.size() != n || reduction.U.rows() != n ||
      reduction.U.cols() != 2) {
    throw DimensionMismatch("quadratic_coefficients: reduction has wrong shape");
  }
  const Eigen::VectorXd u1 = reduction.U.col(0);
  const Eigen::VectorXd u2 = reduction.U.col(1);
  const Eigen::VectorXd& g = reduction.g;

  // Substituting theta = g + U [l1, l2]^T into the two quadratic identities
  // and moving l1 (resp. 2*l2) to the left yields these sextuples.
  QuadraticCoefficients eq1;
  eq1.a = lambda1_bilinear(u1, u1, K);
  eq1.b = 2.0 * lambda1_bilinear(u1, u2, K);
  eq1.c = lambda1_bilinear(u2, u2, K);
  eq1.d = 2.0 * lambda1_bilinear(u1, g, K) - 1.0;
  eq1.e = 2.0 * lambda1_bilinear(u2, g, K);
  eq1.f = lambda1_bilinear(g, g, K);

  QuadraticCoefficients eq2;
  eq2.a = lambda2_bilinear(u1, u1, K);
  eq2.b = 2.0 * lambda2_bilinear(u1, u2, K);
  eq2.c = lambda2_bilinear(u2, u2, K);
  eq2.d = 2.0 * lambda2_bilinear(u1, g, K);
  eq2.e = 2.0 * lambda2_bilinear(u2, g, K) - 2.0;
  eq2.f = lambda2_bilinear(g, g, K);
  return {eq1, eq2};
}

std::vector<UserState> candidate_states(const Reduction& reduction,
                                        const std::vector<RootPair>& pairs,
                                        int K) {
  std::vector<UserState> states;
  states.reserve(pairs.size());
  for (const RootPair& pair : pairs) {
    const Eigen::VectorXd theta =
        reduction.g + reduction.U * Eigen::Vector2d(pair.x, pair.y);
    states.push_back(UserState::from_vector(theta, K));
  }
  return states;
}

std::size_t select_root_index(const Scenario& scenario,
                              const MeasurementSet& meas,
                              const std::vector<UserState>& candidates,
                              double* selected_ssr) {
  if (candidates.empty()) {
    throw NoCandidates("select_root: no candidate states");
  }
  if (meas.taus.size() != scenario.anchor_count()) {
    throw DimensionMismatch("select_root: measurement length mismatch");
  }
  const Eigen::VectorXd w = wls_weights(meas.noise);
  std::size_t best = 0;
  double best_ssr = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const UserState& s = candidates[i];
    double ssr = 0.0;
    for (int m = 0; m < scenario.anchor_count(); ++m) {
      const AnchorNode& a = scenario.anchors[m];
      const double range = (s.p + s.v * a.slot_time - a.position).norm();
      const double predicted =
          range + s.beta + s.omega * a.slot_time - a.clock_offset;
      const double r = meas.taus(m) - predicted;
      ssr += w(m) * r * r;
    }
    if (ssr < best_ssr) {
      best_ssr = ssr;
      best = i;
    }
  }
  if (selected_ssr != nullptr) *selected_ssr = best_ssr;
  return best;
}

UserState select_root(const Scenario& scenario, const MeasurementSet& meas,
                      const std::vector<UserState>& candidates) {
  return candidates[select_root_index(scenario, meas, candidates)];
}

std::pair<UserState, double> wls_refine(const Scenario& scenario,
                                        const MeasurementSet& meas,
                                        const UserState& raw) {
  const Eigen::MatrixXd J = design_matrix(scenario, raw);
  const Eigen::VectorXd w = wls_weights(meas.noise);
  const Eigen::MatrixXd normal = J.transpose() * w.asDiagonal() * J;

  Eigen::MatrixXd normal_inv;
  const double rcond = rcond_1norm(normal, &normal_inv);
  if (!(rcond >= 1e-15)) {
    std::ostringstream msg;
    msg << "wls_refine: normal matrix near singular (rcond=" << rcond << ")";
    throw SingularNormalMatrix(msg.str());
  }

  const Eigen::VectorXd r = residuals(scenario, meas, raw);
  const Eigen::VectorXd delta =
      normal_inv * (J.transpose() * (w.asDiagonal() * r));
  const int K = scenario.K;
  UserState refined = raw;
  refined.p += delta.head(K);
  refined.v += delta.segment(K, K);
  refined.beta += delta(2 * K);
  refined.omega += delta(2 * K + 1);
  return {refined, delta.norm()};
}

EstimationResult estimate(const Scenario& scenario, const MeasurementSet& meas,
                          const SolverOptions& options) {
  const char* stage = "input-validation";
  try {
    stage = "linearization";
    const LinearSystem system =
        build_linear_system(scenario, meas, options.reference_anchor);

    stage = "reduction";
    const Reduction red = reduce(system);

    stage = "intermediate-variables";
    const auto [eq1, eq2] = quadratic_coefficients(red, scenario.K);
    std::vector<RootPair> pairs;
    try {
      pairs = solve_quadratic_pair(eq1, eq2, options.real_root_tol);
    } catch (const NoRealSolution&) {
      // Near-tangent root geometry can push a genuine real root slightly off
      // the real axis; retry once with the wider filter.
      pairs = solve_quadratic_pair(eq1, eq2, options.widened_real_root_tol);
    }

    stage = "root-selection";
    const std::vector<UserState> candidates =
        candidate_states(red, pairs, scenario.K);
    double ssr = 0.0;
    const std::size_t chosen =
        select_root_index(scenario, meas, candidates, &ssr);

    stage = "refinement";
    auto [refined, delta_norm] = wls_refine(scenario, meas, candidates[chosen]);

    EstimationResult result;
    result.theta_refined = std::move(refined);
    result.theta_raw = candidates[chosen];
    result.lambda1 = pairs[chosen].x;
    result.lambda2 = pairs[chosen].y;
    result.candidates_considered = static_cast<int>(candidates.size());
    result.selected_ssr = ssr;
    result.refinement_norm = delta_norm;
    return result;
  } catch (Error& e) {
    e.set_stage(stage);
    throw;
  }
}

}  // namespace cfjlas
