#include "oift/lq.hpp"

#include <Eigen/Cholesky>
#include <Eigen/LU>
#include <cmath>
#include <stdexcept>
#include <string>

#include "oift/projection.hpp"

namespace oift {

namespace {

struct SweepState {
  Eigen::MatrixXd P;
  Eigen::VectorXd r;
};

// -Pdot and -rdot for the double-integrator blocks: A^T P + P A only
// shuffles blocks of P, B^T y extracts the lower half rows of y.
struct SweepRhs {
  const Eigen::LLT<Eigen::MatrixXd>& R_llt;
  const Eigen::MatrixXd& St;  // S^T, N x 2N
  int N;

  void eval(const SweepState& s, const Eigen::MatrixXd& Q, const Eigen::VectorXd& a,
            const Eigen::VectorXd& b, SweepState& out) const {
    const Eigen::MatrixXd W = St + s.P.bottomRows(N);  // S^T + B^T P
    const Eigen::MatrixXd K = R_llt.solve(W);

    out.P.resize(2 * N, 2 * N);
    out.P.topLeftCorner(N, N).setZero();
    out.P.topRightCorner(N, N) = s.P.topLeftCorner(N, N);
    out.P.bottomLeftCorner(N, N) = s.P.topLeftCorner(N, N);
    out.P.bottomRightCorner(N, N) = s.P.topRightCorner(N, N) + s.P.bottomLeftCorner(N, N);
    out.P.noalias() -= W.transpose() * K;  // K^T R K = W^T R^-1 W
    out.P += Q;

    out.r.resize(2 * N);
    out.r.head(N).setZero();
    out.r.tail(N) = s.r.head(N);  // A^T r
    out.r.noalias() -= K.transpose() * (s.r.tail(N) + b);
    out.r += a;
  }
};

}  // namespace

RiccatiSolution riccati_sweep(const LqData& lq, const SystemMatrices& sys) {
  const int N = sys.N();
  const int K = lq.grid.nodes();
  if (static_cast<int>(lq.Q.size()) != K || static_cast<int>(lq.a.size()) != K ||
      static_cast<int>(lq.b.size()) != K) {
    throw std::invalid_argument("riccati_sweep: LqData node count does not match its grid");
  }
  if (lq.R.rows() != N || lq.S.rows() != 2 * N || lq.P1.rows() != 2 * N) {
    throw std::invalid_argument("riccati_sweep: LqData dimensions do not match the system");
  }
  const Eigen::LLT<Eigen::MatrixXd> R_llt(lq.R);
  if (R_llt.info() != Eigen::Success) {
    throw std::invalid_argument("riccati_sweep: R is not positive definite");
  }
  const Eigen::MatrixXd St = lq.S.transpose();
  const SweepRhs rhs{R_llt, St, N};

  RiccatiSolution sol;
  sol.grid = lq.grid;
  sol.P.resize(K);
  sol.K.resize(K);
  sol.r.resize(K);
  sol.P[K - 1] = 0.5 * (lq.P1 + lq.P1.transpose());
  sol.r[K - 1] = lq.r1;

  const double dt = lq.grid.dt;
  SweepState s{sol.P[K - 1], sol.r[K - 1]};
  SweepState f1, f2, f3, f4, stage;
  for (int k = K - 2; k >= 0; --k) {
    const Eigen::MatrixXd Qh = 0.5 * (lq.Q[k] + lq.Q[k + 1]);
    const Eigen::VectorXd ah = 0.5 * (lq.a[k] + lq.a[k + 1]);
    const Eigen::VectorXd bh = 0.5 * (lq.b[k] + lq.b[k + 1]);

    rhs.eval(s, lq.Q[k + 1], lq.a[k + 1], lq.b[k + 1], f1);
    stage.P = s.P + 0.5 * dt * f1.P;
    stage.r = s.r + 0.5 * dt * f1.r;
    rhs.eval(stage, Qh, ah, bh, f2);
    stage.P = s.P + 0.5 * dt * f2.P;
    stage.r = s.r + 0.5 * dt * f2.r;
    rhs.eval(stage, Qh, ah, bh, f3);
    stage.P = s.P + dt * f3.P;
    stage.r = s.r + dt * f3.r;
    rhs.eval(stage, lq.Q[k], lq.a[k], lq.b[k], f4);

    s.P += (dt / 6.0) * (f1.P + 2.0 * f2.P + 2.0 * f3.P + f4.P);
    s.r += (dt / 6.0) * (f1.r + 2.0 * f2.r + 2.0 * f3.r + f4.r);

    if (!s.P.allFinite() || !s.r.allFinite()) {
      throw std::runtime_error("riccati_sweep: non-finite values at t = " +
                               std::to_string(lq.grid.time(k)) + " (Riccati blow-up)");
    }
    const double asym = (s.P - s.P.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-6 * (1.0 + s.P.cwiseAbs().maxCoeff())) {
      throw std::runtime_error("riccati_sweep: symmetry loss " + std::to_string(asym) +
                               " at t = " + std::to_string(lq.grid.time(k)));
    }
    s.P = 0.5 * (s.P + s.P.transpose()).eval();

    sol.P[k] = s.P;
    sol.r[k] = s.r;
  }
  for (int k = 0; k < K; ++k) {
    sol.K[k] = R_llt.solve(St + sol.P[k].bottomRows(N));
  }
  return sol;
}

SearchDirection search_direction(const LqData& lq, const RiccatiSolution& ric,
                                 const SystemMatrices& sys) {
  const int N = sys.N();
  const int K = lq.grid.nodes();
  if (!ric.grid.same(lq.grid) || static_cast<int>(ric.K.size()) != K) {
    throw std::invalid_argument("search_direction: Riccati solution grid mismatch");
  }
  const double dt = lq.grid.dt;
  const Eigen::LLT<Eigen::MatrixXd> R_llt(lq.R);

  SearchDirection dir;
  dir.z = Eigen::MatrixXd::Zero(2 * N, K);
  dir.v.resize(N, K);
  dir.v.col(0) = -R_llt.solve(ric.r[0].tail(N) + lq.b[0]);

  // gamma1 = [dt^2/6 I; dt/2 I] is the sensitivity of an RK4 step to the
  // end-node input; the node rule v = -K z - R^-1(B^T r + b) then gives a
  // small N x N solve per step.
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(N);
  const Eigen::MatrixXd idN = Eigen::MatrixXd::Identity(N, N);
  for (int k = 0; k + 1 < K; ++k) {
    const Eigen::VectorXd v0 = dir.v.col(k);
    const Eigen::VectorXd base = detail::rk4_step(dir.z.col(k), v0, 0.5 * v0, zero, dt);
    const Eigen::MatrixXd& Kn = ric.K[k + 1];
    const Eigen::MatrixXd KG =
        (dt * dt / 6.0) * Kn.leftCols(N) + (0.5 * dt) * Kn.rightCols(N);
    const Eigen::VectorXd c = R_llt.solve(ric.r[k + 1].tail(N) + lq.b[k + 1]);
    const Eigen::VectorXd v1 = (idN + KG).partialPivLu().solve(-(Kn * base + c));
    dir.v.col(k + 1) = v1;
    dir.z.col(k + 1) = detail::rk4_step(dir.z.col(k), v0, 0.5 * (v0 + v1), v1, dt);
    if (!dir.z.col(k + 1).allFinite()) {
      throw std::runtime_error("search_direction: non-finite perturbation at node " +
                               std::to_string(k + 1));
    }
  }

  double acc = 0.0;
  for (int k = 0; k < K; ++k) {
    const double w = (k == 0 || k == K - 1) ? 0.5 : 1.0;
    acc += w * (lq.a[k].dot(dir.z.col(k)) + lq.b[k].dot(dir.v.col(k)));
  }
  dir.dg = acc * dt + lq.r1.dot(dir.z.col(K - 1));
  return dir;
}

}  // namespace oift
