#include "oift/cost.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace oift {

void CostWeights::validate() const {
  if (q_p < 0.0 || q_v < 0.0) {
    throw std::invalid_argument("CostWeights: q_p and q_v must be >= 0");
  }
  if (!(r_a > 0.0)) {
    throw std::invalid_argument("CostWeights: r_a must be > 0");
  }
  if (!(k_F > 0.0)) {
    throw std::invalid_argument("CostWeights: k_F must be > 0");
  }
  potential.validate();
}

Eigen::VectorXd DesiredOutput::operator()(double t) const {
  const double tol = 1e-9 * std::max(1.0, T);
  if (t < -tol || t > T + tol) {
    throw std::out_of_range("DesiredOutput: t = " + std::to_string(t) + " outside [0, " +
                            std::to_string(T) + "]");
  }
  Eigen::VectorXd out = eval(t);
  if (out.size() != 2 * M) {
    throw std::runtime_error("DesiredOutput: generator returned wrong dimension");
  }
  return out;
}

namespace {

double tracking_term(const Eigen::VectorXd& xb, const Eigen::VectorXd& xb_des, int M, double q_p,
                     double q_v) {
  const double ep = (xb.head(M) - xb_des.head(M)).squaredNorm();
  const double ev = (xb.tail(M) - xb_des.tail(M)).squaredNorm();
  return 0.5 * (q_p * ep + q_v * ev);
}

}  // namespace

double instantaneous_cost(const Eigen::VectorXd& x, const Eigen::VectorXd& u, double t,
                          const CostWeights& weights, const SystemSpec& spec,
                          const FormationSpec& formation, const DesiredOutput& desired) {
  const int N = spec.N();
  if (x.size() != 2 * N || u.size() != N) {
    throw std::invalid_argument("instantaneous_cost: state/input dimension mismatch");
  }
  const Eigen::VectorXd xb = barycenter(x, spec);
  const double l_tr = tracking_term(xb, desired(t), spec.M, weights.q_p, weights.q_v);
  const double l_in = 0.5 * weights.r_a * u.squaredNorm();
  const double l_fo =
      formation_cost(x.head(N), formation, weights.k_F, weights.potential);
  return l_tr + l_in + l_fo;
}

double total_cost(const Trajectory& xi, const CostWeights& weights, const SystemSpec& spec,
                  const FormationSpec& formation, const DesiredOutput& desired) {
  const int K = xi.grid.nodes();
  if (xi.x.cols() != K || std::abs(xi.grid.T() - desired.T) > 1e-9 * std::max(1.0, desired.T)) {
    throw std::invalid_argument("total_cost: trajectory grid does not match the desired output");
  }
  double acc = 0.0;
  for (int k = 0; k < K; ++k) {
    const double l = instantaneous_cost(xi.x.col(k), xi.u.col(k), xi.grid.time(k), weights, spec,
                                        formation, desired);
    acc += (k == 0 || k == K - 1) ? 0.5 * l : l;
  }
  return acc * xi.grid.dt;
}

LqData assemble_lq_data(const Trajectory& xi, const CostWeights& weights, const SystemSpec& spec,
                        const FormationSpec& formation, const DesiredOutput& desired,
                        bool safe_hessian) {
  weights.validate();
  const int N = spec.N();
  const int M = spec.M;
  const int K = xi.grid.nodes();
  if (xi.x.rows() != 2 * N || xi.x.cols() != K) {
    throw std::invalid_argument("assemble_lq_data: trajectory does not match the system spec");
  }

  // C^T Q_B C is constant: every (p_i, p_j) block is (q_p/n^2) I_M and every
  // (pdot_i, pdot_j) block is (q_v/n^2) I_M.
  const double n2 = static_cast<double>(spec.n) * spec.n;
  Eigen::MatrixXd q_base = Eigen::MatrixXd::Zero(2 * N, 2 * N);
  for (int i = 0; i < spec.n; ++i) {
    for (int j = 0; j < spec.n; ++j) {
      q_base.block(i * M, j * M, M, M) =
          Eigen::MatrixXd::Identity(M, M) * (weights.q_p / n2);
      q_base.block(N + i * M, N + j * M, M, M) =
          Eigen::MatrixXd::Identity(M, M) * (weights.q_v / n2);
    }
  }

  LqData lq;
  lq.grid = xi.grid;
  lq.a.resize(K);
  lq.b.resize(K);
  lq.Q.resize(K);
  lq.S = Eigen::MatrixXd::Zero(2 * N, N);
  lq.R = weights.r_a * Eigen::MatrixXd::Identity(N, N);
  lq.r1 = Eigen::VectorXd::Zero(2 * N);
  lq.P1 = Eigen::MatrixXd::Zero(2 * N, 2 * N);

  for (int k = 0; k < K; ++k) {
    const Eigen::VectorXd x = xi.x.col(k);
    const Eigen::VectorXd xb = barycenter(x, spec);
    const Eigen::VectorXd e = xb - desired(xi.grid.time(k));

    const FormationDerivatives fo =
        formation_derivatives(x.head(N), formation, weights.k_F, weights.potential, safe_hessian);

    // C^T Q_B e replicates the weighted barycenter residual over agents.
    Eigen::VectorXd a = Eigen::VectorXd::Zero(2 * N);
    const Eigen::VectorXd wp = (weights.q_p / spec.n) * e.head(M);
    const Eigen::VectorXd wv = (weights.q_v / spec.n) * e.tail(M);
    for (int i = 0; i < spec.n; ++i) {
      a.segment(i * M, M) = wp;
      a.segment(N + i * M, M) = wv;
    }
    a.head(N) += fo.grad_p;
    lq.a[k] = a;

    lq.b[k] = weights.r_a * xi.u.col(k);

    Eigen::MatrixXd Q = q_base;
    Q.topLeftCorner(N, N) += fo.hess_pp;
    lq.Q[k] = std::move(Q);
  }
  return lq;
}

}  // namespace oift
