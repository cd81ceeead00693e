#pragma once

#include <Eigen/Core>

namespace oift {

/// A group of n point agents in M-dimensional space, each one a double
/// integrator driven by its acceleration. The stacked state is
/// x = [p_1 .. p_n, pdot_1 .. pdot_n] with N = n*M position coordinates.
struct SystemSpec {
  int n = 0;  ///< agent count, must be > 1
  int M = 0;  ///< spatial dimension, 1, 2 or 3

  int N() const { return n * M; }
  int state_dim() const { return 2 * n * M; }

  /// Throws std::invalid_argument if n <= 1 or M is not in {1,2,3}.
  void validate() const;
};

/// Block matrices of the linear system xdot = A x + B u, x_B = C x.
/// A has the identity in its upper-right N x N block, B in its lower
/// N x N block, and C averages agent positions/velocities with factor 1/n.
struct SystemMatrices {
  int n = 0;
  int M = 0;
  Eigen::MatrixXd A;  ///< 2N x 2N
  Eigen::MatrixXd B;  ///< 2N x N
  Eigen::MatrixXd C;  ///< 2M x 2N

  int N() const { return n * M; }
  int state_dim() const { return 2 * n * M; }

  /// Builds the blocks for any n >= 1. The single-agent case is used by
  /// LQ unit tests on the scalar double integrator; multi-agent callers
  /// should go through build_system, which enforces n > 1.
  static SystemMatrices double_integrator(int n, int M);
};

SystemMatrices build_system(const SystemSpec& spec);

/// State split into the stacked position and velocity halves.
struct StackedState {
  Eigen::VectorXd p;
  Eigen::VectorXd pdot;

  static StackedState from_vector(const Eigen::VectorXd& x);
  Eigen::VectorXd to_vector() const;
};

/// x_B = C x = (mean position, mean velocity), a 2M-vector.
Eigen::VectorXd barycenter(const Eigen::VectorXd& x, const SystemSpec& spec);
Eigen::VectorXd barycenter(const StackedState& x, const SystemSpec& spec);

/// Position / velocity slice of agent i (1-based, matching the usual
/// agent numbering).
Eigen::VectorXd agent_position(const Eigen::VectorXd& x, int i, const SystemSpec& spec);
Eigen::VectorXd agent_velocity(const Eigen::VectorXd& x, int i, const SystemSpec& spec);

/// Mean position of the stacked position vector p (length N).
Eigen::VectorXd mean_position(const Eigen::VectorXd& p, int n, int M);

}  // namespace oift
