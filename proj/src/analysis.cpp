#include "oift/analysis.hpp"

#include <Eigen/QR>
#include <cmath>
#include <stdexcept>

namespace oift {

ConstraintRatio constraint_ratio(const Eigen::VectorXd& p_final, const FormationSpec& formation) {
  if (formation.edges.empty()) {
    throw std::invalid_argument("constraint_ratio: formation has no edges");
  }
  if (formation.n < 2 || p_final.size() % formation.n != 0) {
    throw std::invalid_argument("constraint_ratio: position length does not match agent count");
  }
  const int M = static_cast<int>(p_final.size()) / formation.n;
  ConstraintRatio out;
  out.total = static_cast<int>(formation.edges.size());
  for (const auto& e : formation.edges) {
    const double r =
        (p_final.segment((e.i - 1) * M, M) - p_final.segment((e.j - 1) * M, M)).norm();
    if (std::abs(r - e.d) / e.d < 0.1) ++out.satisfied;
  }
  return out;
}

Eigen::VectorXd tracking_displacement(const Trajectory& xi, const DesiredOutput& desired,
                                      const SystemSpec& spec) {
  const int K = xi.grid.nodes();
  if (std::abs(xi.grid.T() - desired.T) > 1e-9 * std::max(1.0, desired.T)) {
    throw std::invalid_argument("tracking_displacement: grid horizon mismatch");
  }
  Eigen::VectorXd out(K);
  for (int k = 0; k < K; ++k) {
    const Eigen::VectorXd xb = barycenter(xi.x.col(k), spec);
    const Eigen::VectorXd des = desired(xi.grid.time(k));
    out[k] = (xb.head(spec.M) - des.head(spec.M)).norm();
  }
  return out;
}

CostTermSeries cost_term_series(const Trajectory& xi, const CostWeights& weights,
                                const SystemSpec& spec, const FormationSpec& formation,
                                const DesiredOutput& desired) {
  const int K = xi.grid.nodes();
  const int N = spec.N();
  CostTermSeries out;
  out.tracking.resize(K);
  out.input.resize(K);
  out.formation.resize(K);
  for (int k = 0; k < K; ++k) {
    const Eigen::VectorXd xb = barycenter(xi.x.col(k), spec);
    const Eigen::VectorXd des = desired(xi.grid.time(k));
    out.tracking[k] = 0.5 * (weights.q_p * (xb.head(spec.M) - des.head(spec.M)).squaredNorm() +
                             weights.q_v * (xb.tail(spec.M) - des.tail(spec.M)).squaredNorm());
    out.input[k] = 0.5 * weights.r_a * xi.u.col(k).squaredNorm();
    out.formation[k] =
        formation_cost(xi.x.col(k).head(N), formation, weights.k_F, weights.potential);
  }
  return out;
}

double subspace_residual(const Trajectory& xi, const std::vector<Eigen::VectorXd>& basis,
                         const SystemSpec& spec) {
  if (basis.empty()) {
    throw std::invalid_argument("subspace_residual: empty basis");
  }
  const int M = spec.M;
  Eigen::MatrixXd S(M, static_cast<int>(basis.size()));
  for (int c = 0; c < S.cols(); ++c) {
    if (basis[c].size() != M) {
      throw std::invalid_argument("subspace_residual: basis vector length must be M");
    }
    S.col(c) = basis[c];
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(S);
  if (qr.rank() < S.cols()) {
    throw std::invalid_argument("subspace_residual: degenerate basis");
  }
  const Eigen::MatrixXd Q =
      qr.householderQ() * Eigen::MatrixXd::Identity(M, static_cast<int>(S.cols()));

  double worst = 0.0;
  for (int k = 0; k < xi.grid.nodes(); ++k) {
    for (int i = 1; i <= spec.n; ++i) {
      const Eigen::VectorXd p = agent_position(xi.x.col(k), i, spec);
      worst = std::max(worst, (p - Q * (Q.transpose() * p)).norm());
    }
  }
  return worst;
}

}  // namespace oift
