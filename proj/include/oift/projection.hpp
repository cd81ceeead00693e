#pragma once

#include <Eigen/Core>

#include "oift/model.hpp"
#include "oift/trajectory.hpp"

namespace oift {

/// Constant PD tracking gains, K = [k_p I_N, k_v I_N].
struct FeedbackGains {
  double k_p = 0.0;  ///< position gain, s^-2
  double k_v = 0.0;  ///< velocity gain, s^-1

  /// k_p = omega_n^2, k_v = 2 zeta omega_n.
  static FeedbackGains from_frequency(double omega_n, double zeta);
  void validate() const;
};

/// Default gains: omega_n = 3 rad/s, zeta = 0.7, so k_p = 9, k_v = 4.2.
FeedbackGains default_gains();

/// Projection operator P: closes the loop u = mu + K(alpha - x) around the
/// double-integrator dynamics and integrates from x0 with fixed-step RK4.
///
/// Inputs enter each RK4 step through the piecewise-linear rule (node value
/// at step ends, average at the half step); the node input is solved
/// implicitly from the feedback law, so the returned pair satisfies
/// u_k = mu_k + K(alpha_k - x_k) at every node and re-integrates exactly.
/// Throws std::runtime_error with the offending node if the integration
/// produces non-finite values.
Trajectory project(const Curve& curve, const FeedbackGains& gains, const SystemMatrices& sys,
                   const Eigen::VectorXd& x0);

/// Open-loop RK4 rollout of xdot = A x + B u from x0; u is N x nodes.
Trajectory open_loop_rollout(const Eigen::MatrixXd& u, const TimeGrid& grid,
                             const SystemMatrices& sys, const Eigen::VectorXd& x0);

/// Maximum over steps of || x_{k+1} - rk4_step(x_k; u_k, u_{k+1}) ||_inf,
/// i.e. how well (x, u) re-integrates under the stored inputs. Valid
/// trajectories give 0 up to rounding. Works for any (state, input) pair
/// with double-integrator dimensions, including LQ perturbations (z, v).
double rollout_defect(const Eigen::MatrixXd& x, const Eigen::MatrixXd& u, double dt);
double trajectory_defect(const Trajectory& xi);

namespace detail {

/// One classical RK4 step of xdot = [pdot; u(t)] with input samples at the
/// step start, half step and end. Exact for the double integrator.
Eigen::VectorXd rk4_step(const Eigen::VectorXd& x, const Eigen::VectorXd& u0,
                         const Eigen::VectorXd& uh, const Eigen::VectorXd& u1, double dt);

}  // namespace detail

}  // namespace oift
