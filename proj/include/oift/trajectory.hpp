#pragma once

#include <Eigen/Core>

namespace oift {

/// Uniform time grid over [0, T] with step dt. Node k sits at k*dt.
struct TimeGrid {
  double dt = 0.0;
  int steps = 0;  ///< number of intervals; nodes() = steps + 1

  TimeGrid() = default;
  TimeGrid(double T, double dt);  ///< throws if dt does not divide T

  int nodes() const { return steps + 1; }
  double T() const { return dt * steps; }
  double time(int k) const { return dt * k; }
  bool same(const TimeGrid& other) const;
};

/// A state-input curve in the ambient space: not required to satisfy the
/// dynamics. Columns are grid nodes; alpha is 2N x nodes, mu is N x nodes.
struct Curve {
  TimeGrid grid;
  Eigen::MatrixXd alpha;
  Eigen::MatrixXd mu;
};

enum class IntegrationScheme { rk4_linear_u };

/// An element of the trajectory manifold: (x, u) sampled on the grid with u
/// treated as piecewise linear between nodes, so that every stored step
/// re-integrates exactly under one RK4 step (see rollout_defect).
struct Trajectory {
  TimeGrid grid;
  Eigen::MatrixXd x;  ///< 2N x nodes
  Eigen::MatrixXd u;  ///< N x nodes
  IntegrationScheme scheme = IntegrationScheme::rk4_linear_u;

  Curve as_curve() const { return Curve{grid, x, u}; }
};

/// Node-wise xi + gamma * (z, v), the curve handed to the projection in the
/// line-search update.
Curve add_scaled(const Trajectory& xi, double gamma, const Eigen::MatrixXd& z,
                 const Eigen::MatrixXd& v);

}  // namespace oift
