#pragma once

// Independent reference computations used by the unit and acceptance suites:
// a dense KKT solve of the discretized LQ problem, closed-form second-order
// step responses, a refined backward-Euler Riccati integration and exact
// reference geometries. Everything here deliberately avoids the library's
// structured fast paths.

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "oift/cost.hpp"
#include "oift/lq.hpp"
#include "oift/model.hpp"

namespace oracles {

struct DenseLqSolution {
  Eigen::MatrixXd z;  // 2N x nodes
  Eigen::MatrixXd v;  // N x nodes
};

// Solves the discretized LQ problem as one dense equality-constrained QP:
// decision variables are all node values of (z, v), the dynamics constraint
// uses the exact discrete map of the double integrator under piecewise-linear
// input, and the objective is the exact integral of the stage cost along the
// induced piecewise-cubic state (4-point Gauss per interval, exact up to
// polynomial degree 7, which covers the z^T Q z term with linear data). The
// KKT system is solved by full-pivot LU.
inline DenseLqSolution solve_lq_qp(const oift::LqData& lq, const oift::SystemMatrices& sys) {
  const int N = sys.N();
  const int twoN = 2 * N;
  const int K = lq.grid.nodes();
  const double dt = lq.grid.dt;
  const int nz = twoN * K;
  const int nv = N * K;
  const int nw = nz + nv;
  const int nc = twoN * K;

  // Exact maps for xdot = A x + B u with A^2 = 0 and u piecewise linear:
  // Phi = I + dt A, G0 = dt/2 B + dt^2/3 A B, G1 = dt/2 B + dt^2/6 A B.
  const Eigen::MatrixXd AB = sys.A * sys.B;
  const Eigen::MatrixXd Phi = Eigen::MatrixXd::Identity(twoN, twoN) + dt * sys.A;
  const Eigen::MatrixXd G0 = 0.5 * dt * sys.B + dt * dt / 3.0 * AB;
  const Eigen::MatrixXd G1 = 0.5 * dt * sys.B + dt * dt / 6.0 * AB;

  // Gauss-Legendre nodes/weights on [0, 1].
  const double gs[4] = {0.06943184420297371239, 0.33000947820757186760,
                        0.66999052179242813240, 0.93056815579702628761};
  const double gw[4] = {0.17392742256872692869, 0.32607257743127307131,
                        0.32607257743127307131, 0.17392742256872692869};

  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(nw, nw);
  Eigen::VectorXd g = Eigen::VectorXd::Zero(nw);
  const int y_dim = twoN + 2 * N;
  for (int k = 0; k + 1 < K; ++k) {
    // local variables y = (z_k, v_k, v_{k+1})
    Eigen::MatrixXd Hy = Eigen::MatrixXd::Zero(y_dim, y_dim);
    Eigen::VectorXd gy = Eigen::VectorXd::Zero(y_dim);
    for (int q = 0; q < 4; ++q) {
      const double s = gs[q];
      const double h = s * dt;
      // z(t_k + h) = Phi_h z_k + G0_h v_k + G1_h v_{k+1}, exact for PL input
      Eigen::MatrixXd E(twoN, y_dim);
      E.leftCols(twoN) = Eigen::MatrixXd::Identity(twoN, twoN) + h * sys.A;
      E.middleCols(twoN, N) = (h - h * h / (2.0 * dt)) * sys.B +
                              (h * h / 2.0 - h * h * h / (6.0 * dt)) * AB;
      E.rightCols(N) = (h * h / (2.0 * dt)) * sys.B + (h * h * h / (6.0 * dt)) * AB;
      Eigen::MatrixXd F = Eigen::MatrixXd::Zero(N, y_dim);
      F.middleCols(twoN, N) = (1.0 - s) * Eigen::MatrixXd::Identity(N, N);
      F.rightCols(N) = s * Eigen::MatrixXd::Identity(N, N);

      const Eigen::MatrixXd Qg = (1.0 - s) * lq.Q[k] + s * lq.Q[k + 1];
      const Eigen::VectorXd ag = (1.0 - s) * lq.a[k] + s * lq.a[k + 1];
      const Eigen::VectorXd bg = (1.0 - s) * lq.b[k] + s * lq.b[k + 1];

      const double w = gw[q] * dt;
      Hy += w * (E.transpose() * Qg * E + F.transpose() * lq.R * F);
      const Eigen::MatrixXd cross = E.transpose() * (lq.S * F);
      Hy += w * (cross + cross.transpose());
      gy += w * (E.transpose() * ag + F.transpose() * bg);
    }
    const int zi = k * twoN;
    const int vi = nz + k * N;
    H.block(zi, zi, twoN, twoN) += Hy.topLeftCorner(twoN, twoN);
    H.block(vi, vi, 2 * N, 2 * N) += Hy.bottomRightCorner(2 * N, 2 * N);
    H.block(zi, vi, twoN, 2 * N) += Hy.topRightCorner(twoN, 2 * N);
    H.block(vi, zi, 2 * N, twoN) += Hy.bottomLeftCorner(2 * N, twoN);
    g.segment(zi, twoN) += gy.head(twoN);
    g.segment(vi, 2 * N) += gy.tail(2 * N);
  }
  g.segment((K - 1) * twoN, twoN) += lq.r1;
  H.block((K - 1) * twoN, (K - 1) * twoN, twoN, twoN) += lq.P1;

  Eigen::MatrixXd Aeq = Eigen::MatrixXd::Zero(nc, nw);
  Aeq.block(0, 0, twoN, twoN).setIdentity();  // z_0 = 0
  for (int k = 0; k + 1 < K; ++k) {
    const int row = twoN * (k + 1);
    Aeq.block(row, (k + 1) * twoN, twoN, twoN).setIdentity();
    Aeq.block(row, k * twoN, twoN, twoN) = -Phi;
    Aeq.block(row, nz + k * N, twoN, N) = -G0;
    Aeq.block(row, nz + (k + 1) * N, twoN, N) = -G1;
  }

  Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(nw + nc, nw + nc);
  kkt.topLeftCorner(nw, nw) = H;
  kkt.topRightCorner(nw, nc) = Aeq.transpose();
  kkt.bottomLeftCorner(nc, nw) = Aeq;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nw + nc);
  rhs.head(nw) = -g;
  const Eigen::VectorXd sol = kkt.fullPivLu().solve(rhs);

  DenseLqSolution out;
  out.z.resize(twoN, K);
  out.v.resize(N, K);
  for (int k = 0; k < K; ++k) {
    out.z.col(k) = sol.segment(k * twoN, twoN);
    out.v.col(k) = sol.segment(nz + k * N, N);
  }
  return out;
}

// Backward explicit Euler on the Riccati equation with `substeps` steps per
// grid interval; node data interpolated linearly. Returns P(0).
inline Eigen::MatrixXd riccati_euler_p0(const oift::LqData& lq, const oift::SystemMatrices& sys,
                                        int substeps) {
  const Eigen::MatrixXd Rinv = lq.R.inverse();
  Eigen::MatrixXd P = lq.P1;
  const double h = lq.grid.dt / substeps;
  for (int k = lq.grid.steps - 1; k >= 0; --k) {
    for (int j = substeps - 1; j >= 0; --j) {
      const double frac = static_cast<double>(j + 1) / substeps;
      const Eigen::MatrixXd Q = (1.0 - frac) * lq.Q[k] + frac * lq.Q[k + 1];
      const Eigen::MatrixXd K = Rinv * (lq.S.transpose() + sys.B.transpose() * P);
      const Eigen::MatrixXd minus_Pdot =
          sys.A.transpose() * P + P * sys.A - K.transpose() * lq.R * K + Q;
      P += h * minus_Pdot;
      P = 0.5 * (P + P.transpose()).eval();
    }
  }
  return P;
}

// Unit-step response of pddot = k_p (1 - p) - k_v pdot from rest,
// underdamped case.
inline double second_order_step(double t, double omega_n, double zeta) {
  const double wd = omega_n * std::sqrt(1.0 - zeta * zeta);
  return 1.0 - std::exp(-zeta * omega_n * t) *
                   (std::cos(wd * t) + zeta * omega_n / wd * std::sin(wd * t));
}

inline double analytic_overshoot(double zeta) {
  return std::exp(-zeta * std::numbers::pi / std::sqrt(1.0 - zeta * zeta));
}

// Stacked 2D vertices of a regular pentagon with the given side length.
inline Eigen::VectorXd regular_pentagon(double side) {
  const double rc = side / (2.0 * std::sin(std::numbers::pi / 5.0));
  Eigen::VectorXd p(10);
  for (int k = 0; k < 5; ++k) {
    const double ang = 2.0 * std::numbers::pi * k / 5.0;
    p[2 * k] = rc * std::cos(ang);
    p[2 * k + 1] = rc * std::sin(ang);
  }
  return p;
}

// Stacked 3D vertices of a regular octahedron with the given edge length.
inline Eigen::VectorXd octahedron(double edge) {
  const double c = edge / std::sqrt(2.0);
  Eigen::VectorXd p(18);
  p << c, 0, 0, -c, 0, 0, 0, c, 0, 0, -c, 0, 0, 0, c, 0, 0, -c;
  return p;
}

// Smooth random LQ data: Q(t) = W(t)^T W(t) with W affine in sin(w t), a and
// b low-frequency sinusoids. Everything stays PSD and gentle so that the
// discretization gap between the sweep and the dense QP stays far below the
// comparison tolerances.
inline oift::LqData random_smooth_lq(const oift::SystemMatrices& sys, const oift::TimeGrid& grid,
                                     std::mt19937_64& rng, double s_scale = 0.0) {
  const int N = sys.N();
  const int twoN = 2 * N;
  const int K = grid.nodes();
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> pos(0.5, 2.0);

  Eigen::MatrixXd W0(twoN, twoN), W1(twoN, twoN);
  for (int r = 0; r < twoN; ++r)
    for (int c = 0; c < twoN; ++c) {
      W0(r, c) = unit(rng);
      W1(r, c) = 0.3 * unit(rng);
    }
  Eigen::VectorXd a0(twoN), a1(twoN);
  Eigen::VectorXd b0(N), b1(N);
  for (int r = 0; r < twoN; ++r) {
    a0[r] = unit(rng);
    a1[r] = unit(rng);
  }
  for (int r = 0; r < N; ++r) {
    b0[r] = unit(rng);
    b1[r] = unit(rng);
  }
  const double omega = 2.0 * std::numbers::pi / grid.T();
  const double r_a = pos(rng);

  oift::LqData lq;
  lq.grid = grid;
  lq.R = r_a * Eigen::MatrixXd::Identity(N, N);
  lq.S = Eigen::MatrixXd::Zero(twoN, N);
  if (s_scale > 0.0) {
    for (int r = 0; r < twoN; ++r)
      for (int c = 0; c < N; ++c) lq.S(r, c) = s_scale * unit(rng);
  }
  lq.r1 = Eigen::VectorXd::Zero(twoN);
  lq.P1 = Eigen::MatrixXd::Zero(twoN, twoN);
  lq.a.resize(K);
  lq.b.resize(K);
  lq.Q.resize(K);
  for (int k = 0; k < K; ++k) {
    const double t = grid.time(k);
    const Eigen::MatrixXd W = W0 + std::sin(omega * t) * W1;
    lq.Q[k] = W.transpose() * W;
    if (s_scale > 0.0) {
      // keep the joint stage cost convex
      lq.Q[k] += (s_scale * s_scale / r_a) * static_cast<double>(twoN) *
                 Eigen::MatrixXd::Identity(twoN, twoN);
    }
    lq.a[k] = a0 + std::sin(omega * t + 0.7) * a1;
    lq.b[k] = b0 + std::cos(omega * t) * b1;
  }
  return lq;
}

}  // namespace oracles
