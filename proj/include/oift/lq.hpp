#pragma once

#include <Eigen/Core>
#include <vector>

#include "oift/cost.hpp"
#include "oift/model.hpp"

namespace oift {

/// Backward-sweep data at every grid node.
struct RiccatiSolution {
  TimeGrid grid;
  std::vector<Eigen::MatrixXd> P;  ///< 2N x 2N, symmetric
  std::vector<Eigen::MatrixXd> K;  ///< N x 2N, K = R^-1 (S^T + B^T P)
  std::vector<Eigen::VectorXd> r;  ///< 2N, affine adjoint
};

/// Integrates the differential Riccati equation
///   -Pdot = A^T P + P A - K^T R K + Q,   P(T) = P1
/// together with the affine adjoint
///   -rdot = (A - B K)^T r + a - K^T b,   r(T) = r1
/// backward with RK4; node data (Q, a, b) are interpolated linearly at the
/// half steps. P is symmetrized after every step; a symmetry loss beyond
/// tolerance or a non-finite entry raises std::runtime_error naming the
/// failure time.
RiccatiSolution riccati_sweep(const LqData& lq, const SystemMatrices& sys);

/// LQ minimizer (z, v) and the descent inner product dg = Dg(xi) . zeta.
struct SearchDirection {
  Eigen::MatrixXd z;  ///< 2N x nodes, z(0) = 0
  Eigen::MatrixXd v;  ///< N x nodes
  double dg = 0.0;
};

/// Forward pass: integrates zdot = A z + B v from z(0) = 0 where the input
/// follows the optimality rule v = -K z - R^-1 (B^T r + b) at the nodes and
/// is piecewise linear in between (same convention as the projection, so the
/// returned pair re-integrates exactly). dg is the trapezoid quadrature of
/// a^T z + b^T v plus the terminal term r1^T z(T).
SearchDirection search_direction(const LqData& lq, const RiccatiSolution& ric,
                                 const SystemMatrices& sys);

}  // namespace oift
