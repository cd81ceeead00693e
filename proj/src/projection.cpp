#include "oift/projection.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace oift {

TimeGrid::TimeGrid(double T, double dt_) {
  if (!(T > 0.0) || !(dt_ > 0.0)) {
    throw std::invalid_argument("TimeGrid: need T > 0 and dt > 0");
  }
  steps = static_cast<int>(std::llround(T / dt_));
  dt = dt_;
  if (steps < 1 || std::abs(steps * dt_ - T) > 1e-9 * std::max(1.0, T)) {
    throw std::invalid_argument("TimeGrid: dt = " + std::to_string(dt_) +
                                " does not divide T = " + std::to_string(T));
  }
}

bool TimeGrid::same(const TimeGrid& other) const {
  return steps == other.steps && dt == other.dt;
}

Curve add_scaled(const Trajectory& xi, double gamma, const Eigen::MatrixXd& z,
                 const Eigen::MatrixXd& v) {
  if (z.rows() != xi.x.rows() || z.cols() != xi.x.cols() || v.rows() != xi.u.rows() ||
      v.cols() != xi.u.cols()) {
    throw std::invalid_argument("add_scaled: perturbation dimensions do not match trajectory");
  }
  return Curve{xi.grid, xi.x + gamma * z, xi.u + gamma * v};
}

FeedbackGains FeedbackGains::from_frequency(double omega_n, double zeta) {
  if (!(omega_n > 0.0) || !(zeta > 0.0)) {
    throw std::invalid_argument("FeedbackGains: need omega_n > 0 and zeta > 0");
  }
  return FeedbackGains{omega_n * omega_n, 2.0 * zeta * omega_n};
}

void FeedbackGains::validate() const {
  if (!(k_p > 0.0) || !(k_v > 0.0)) {
    throw std::invalid_argument("FeedbackGains: gains must be > 0");
  }
}

FeedbackGains default_gains() { return FeedbackGains::from_frequency(3.0, 0.7); }

namespace detail {

Eigen::VectorXd rk4_step(const Eigen::VectorXd& x, const Eigen::VectorXd& u0,
                         const Eigen::VectorXd& uh, const Eigen::VectorXd& u1, double dt) {
  const auto N = u0.size();
  const auto pos = x.head(N);
  const auto vel = x.tail(N);

  // Stage derivatives of xdot = [pdot; u].
  const Eigen::VectorXd k1p = vel;
  const Eigen::VectorXd k2p = vel + 0.5 * dt * u0;
  const Eigen::VectorXd k3p = vel + 0.5 * dt * uh;
  const Eigen::VectorXd k4p = vel + dt * uh;

  Eigen::VectorXd out(2 * N);
  out.head(N) = pos + (dt / 6.0) * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
  out.tail(N) = vel + (dt / 6.0) * (u0 + 4.0 * uh + u1);
  return out;
}

}  // namespace detail

namespace {

void check_finite(const Eigen::VectorXd& x, int node, const char* who) {
  if (!x.allFinite()) {
    throw std::runtime_error(std::string(who) + ": non-finite state at node " +
                             std::to_string(node));
  }
}

}  // namespace

Trajectory project(const Curve& curve, const FeedbackGains& gains, const SystemMatrices& sys,
                   const Eigen::VectorXd& x0) {
  gains.validate();
  const int N = sys.N();
  const int K = curve.grid.nodes();
  if (curve.alpha.rows() != 2 * N || curve.mu.rows() != N || curve.alpha.cols() != K ||
      curve.mu.cols() != K) {
    throw std::invalid_argument("project: curve dimensions do not match the system/grid");
  }
  if (x0.size() != 2 * N) {
    throw std::invalid_argument("project: x0 length mismatch");
  }
  const double dt = curve.grid.dt;
  const double kp = gains.k_p;
  const double kv = gains.k_v;

  Trajectory xi;
  xi.grid = curve.grid;
  xi.x.resize(2 * N, K);
  xi.u.resize(N, K);
  xi.x.col(0) = x0;
  xi.u.col(0) = curve.mu.col(0) + kp * (curve.alpha.col(0).head(N) - x0.head(N)) +
                kv * (curve.alpha.col(0).tail(N) - x0.tail(N));

  // x_{k+1} depends affinely on the end-node input u1 through
  // gamma1 = [dt^2/6 I; dt/2 I]; combined with u1 = mu + K(alpha - x_{k+1})
  // this gives a scalar implicit equation per input component.
  const double denom = 1.0 + kv * dt / 2.0 + kp * dt * dt / 6.0;
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(N);
  for (int k = 0; k + 1 < K; ++k) {
    const Eigen::VectorXd u0 = xi.u.col(k);
    const Eigen::VectorXd base = detail::rk4_step(xi.x.col(k), u0, 0.5 * u0, zero, dt);
    const Eigen::VectorXd w = curve.mu.col(k + 1) + kp * curve.alpha.col(k + 1).head(N) +
                              kv * curve.alpha.col(k + 1).tail(N);
    const Eigen::VectorXd u1 = (w - kp * base.head(N) - kv * base.tail(N)) / denom;
    xi.u.col(k + 1) = u1;
    xi.x.col(k + 1) = detail::rk4_step(xi.x.col(k), u0, 0.5 * (u0 + u1), u1, dt);
    check_finite(xi.x.col(k + 1), k + 1, "project");
  }
  return xi;
}

Trajectory open_loop_rollout(const Eigen::MatrixXd& u, const TimeGrid& grid,
                             const SystemMatrices& sys, const Eigen::VectorXd& x0) {
  const int N = sys.N();
  const int K = grid.nodes();
  if (u.rows() != N || u.cols() != K) {
    throw std::invalid_argument("open_loop_rollout: input dimensions do not match the grid");
  }
  if (x0.size() != 2 * N) {
    throw std::invalid_argument("open_loop_rollout: x0 length mismatch");
  }
  Trajectory xi;
  xi.grid = grid;
  xi.x.resize(2 * N, K);
  xi.u = u;
  xi.x.col(0) = x0;
  for (int k = 0; k + 1 < K; ++k) {
    xi.x.col(k + 1) = detail::rk4_step(xi.x.col(k), u.col(k), 0.5 * (u.col(k) + u.col(k + 1)),
                                       u.col(k + 1), grid.dt);
    check_finite(xi.x.col(k + 1), k + 1, "open_loop_rollout");
  }
  return xi;
}

double rollout_defect(const Eigen::MatrixXd& x, const Eigen::MatrixXd& u, double dt) {
  if (x.rows() != 2 * u.rows() || x.cols() != u.cols() || x.cols() < 2) {
    throw std::invalid_argument("rollout_defect: inconsistent state/input dimensions");
  }
  double worst = 0.0;
  for (int k = 0; k + 1 < x.cols(); ++k) {
    const Eigen::VectorXd step = detail::rk4_step(x.col(k), u.col(k),
                                                  0.5 * (u.col(k) + u.col(k + 1)), u.col(k + 1), dt);
    worst = std::max(worst, (x.col(k + 1) - step).cwiseAbs().maxCoeff());
  }
  return worst;
}

double trajectory_defect(const Trajectory& xi) { return rollout_defect(xi.x, xi.u, xi.grid.dt); }

}  // namespace oift
