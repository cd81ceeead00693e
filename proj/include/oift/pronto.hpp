#pragma once

#include <Eigen/Core>
#include <vector>

#include "oift/cost.hpp"
#include "oift/lq.hpp"
#include "oift/model.hpp"
#include "oift/potential.hpp"
#include "oift/projection.hpp"

namespace oift {

struct SolverOptions {
  int max_iter = 50;
  double epsilon = 1e-8;       ///< terminate once -Dg.zeta < epsilon
  double armijo_alpha = 1e-4;  ///< sufficient-decrease coefficient, (0, 0.5]
  double armijo_beta = 0.5;    ///< backtracking factor, (0, 1)
  double gamma_min = 1e-8;     ///< smallest admissible step
  bool safe_hessian = true;    ///< assemble the PSD formation Hessian

  void validate() const;
};

struct IterationRecord {
  int k = 0;
  double g = 0.0;      ///< cost at the iterate
  double dg = 0.0;     ///< descent inner product Dg . zeta
  double gamma = 0.0;  ///< accepted step (0 on the terminal record)
  int backtracks = 0;
};

enum class SolveStatus { converged, max_iter_reached, line_search_failed };

const char* to_string(SolveStatus status);

struct SolveResult {
  Trajectory xi;
  std::vector<IterationRecord> history;
  SolveStatus status = SolveStatus::max_iter_reached;
};

/// Everything that defines one OIFT instance.
struct Problem {
  SystemSpec spec;
  SystemMatrices sys;
  Eigen::VectorXd x0;
  FormationSpec formation;
  CostWeights weights;
  DesiredOutput desired;
  FeedbackGains gains;
  TimeGrid grid;

  static Problem make(const SystemSpec& spec, const Eigen::VectorXd& x0,
                      const FormationSpec& formation, const CostWeights& weights,
                      DesiredOutput desired, const FeedbackGains& gains, const TimeGrid& grid);

  double cost(const Trajectory& xi) const;
};

struct LineSearchResult {
  bool success = false;
  double gamma = 0.0;
  double g_new = 0.0;
  int backtracks = 0;
  Trajectory xi_new;
};

/// Armijo backtracking on g(P(xi + gamma zeta)): accepts the largest
/// gamma = beta^m with g_new <= g + armijo_alpha * gamma * dg, down to
/// gamma_min. Requires dg < 0 (throws std::invalid_argument otherwise).
LineSearchResult line_search(const Problem& problem, const Trajectory& xi,
                             const SearchDirection& zeta, double g_current,
                             const SolverOptions& options);

/// Projection operator Newton's method: starting from the zero-input
/// rollout of x0, repeats search direction / line search / projection until
/// -Dg.zeta < epsilon or max_iter. The history records one entry per
/// iteration plus a terminal entry on convergence.
SolveResult solve(const Problem& problem, const SolverOptions& options);

}  // namespace oift
