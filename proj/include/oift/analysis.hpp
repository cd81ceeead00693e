#pragma once

#include <Eigen/Core>
#include <vector>

#include "oift/cost.hpp"
#include "oift/model.hpp"
#include "oift/potential.hpp"
#include "oift/trajectory.hpp"

namespace oift {

/// Satisfied-over-total count of formation constraints, phi_c.
struct ConstraintRatio {
  int satisfied = 0;
  int total = 0;
  double ratio() const { return total > 0 ? static_cast<double>(satisfied) / total : 0.0; }
};

/// Counts the undirected edges with |r_ij - d_ij| / d_ij < 0.1 at the given
/// stacked position vector. Throws on an empty edge set.
ConstraintRatio constraint_ratio(const Eigen::VectorXd& p_final, const FormationSpec& formation);

/// Per-node barycenter position displacement |p_B(t) - p_B,des(t)|_2.
Eigen::VectorXd tracking_displacement(const Trajectory& xi, const DesiredOutput& desired,
                                      const SystemSpec& spec);

/// Node series of the three instantaneous cost terms.
struct CostTermSeries {
  Eigen::VectorXd tracking;
  Eigen::VectorXd input;
  Eigen::VectorXd formation;
};

CostTermSeries cost_term_series(const Trajectory& xi, const CostWeights& weights,
                                const SystemSpec& spec, const FormationSpec& formation,
                                const DesiredOutput& desired);

/// Max over nodes and agents of the agent-position component orthogonal to
/// span(basis). Throws std::invalid_argument when the basis is degenerate.
double subspace_residual(const Trajectory& xi, const std::vector<Eigen::VectorXd>& basis,
                         const SystemSpec& spec);

}  // namespace oift
