#pragma once

#include <Eigen/Core>
#include <functional>
#include <vector>

#include "oift/model.hpp"
#include "oift/potential.hpp"
#include "oift/trajectory.hpp"

namespace oift {

/// Weights of the three cost terms. Q_B = diag(q_p I_M, q_v I_M), R = r_a I_N.
struct CostWeights {
  double q_p = 10.0;  ///< barycenter position weight, m^-2
  double q_v = 1.0;   ///< barycenter velocity weight, m^-2 s^2
  double r_a = 1.0;   ///< input weight, m^-2 s^4
  double k_F = 0.1;   ///< formation weight
  PotentialParams potential;

  void validate() const;
};

/// Desired barycenter output x_B,des(t) = (position, velocity) on [0, T].
/// Generators supply the velocity half analytically.
struct DesiredOutput {
  int M = 0;
  double T = 0.0;
  std::function<Eigen::VectorXd(double)> eval;

  /// Range-checked evaluation; throws std::out_of_range outside [0, T].
  Eigen::VectorXd operator()(double t) const;
};

/// l = 1/2 |x_B - x_B,des|^2_QB + 1/2 |u|^2_R + l^fo(p).
double instantaneous_cost(const Eigen::VectorXd& x, const Eigen::VectorXd& u, double t,
                          const CostWeights& weights, const SystemSpec& spec,
                          const FormationSpec& formation, const DesiredOutput& desired);

/// h = integral of l over [0, T] by composite trapezoid on the grid.
/// The terminal cost is identically zero (P1 = 0).
double total_cost(const Trajectory& xi, const CostWeights& weights, const SystemSpec& spec,
                  const FormationSpec& formation, const DesiredOutput& desired);

/// Time-varying data of the LQ search-direction problem, sampled per node:
///   a   = C^T Q_B (x_B - x_B,des) + grad_x l^fo     (2N)
///   b   = R u                                       (N)
///   Q   = C^T Q_B C + H_xx l^fo                     (2N x 2N)
/// with constant S = 0, R = r_a I and zero terminal data r1, P1.
struct LqData {
  TimeGrid grid;
  std::vector<Eigen::VectorXd> a;
  std::vector<Eigen::VectorXd> b;
  std::vector<Eigen::MatrixXd> Q;
  Eigen::MatrixXd S;
  Eigen::MatrixXd R;
  Eigen::VectorXd r1;
  Eigen::MatrixXd P1;
};

/// safe_hessian selects the PSD formation Hessian for the Q blocks.
LqData assemble_lq_data(const Trajectory& xi, const CostWeights& weights, const SystemSpec& spec,
                        const FormationSpec& formation, const DesiredOutput& desired,
                        bool safe_hessian);

}  // namespace oift
