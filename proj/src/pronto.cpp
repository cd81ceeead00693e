#include "oift/pronto.hpp"

#include <Eigen/Eigenvalues>
#include <stdexcept>
#include <string>

namespace oift {

void SolverOptions::validate() const {
  if (max_iter < 1) throw std::invalid_argument("SolverOptions: max_iter must be >= 1");
  if (!(epsilon > 0.0)) throw std::invalid_argument("SolverOptions: epsilon must be > 0");
  if (!(armijo_alpha > 0.0) || armijo_alpha > 0.5) {
    throw std::invalid_argument("SolverOptions: armijo_alpha must be in (0, 0.5]");
  }
  if (!(armijo_beta > 0.0) || !(armijo_beta < 1.0)) {
    throw std::invalid_argument("SolverOptions: armijo_beta must be in (0, 1)");
  }
  if (!(gamma_min > 0.0)) throw std::invalid_argument("SolverOptions: gamma_min must be > 0");
}

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::max_iter_reached: return "max_iter_reached";
    case SolveStatus::line_search_failed: return "line_search_failed";
  }
  return "unknown";
}

Problem Problem::make(const SystemSpec& spec, const Eigen::VectorXd& x0,
                      const FormationSpec& formation, const CostWeights& weights,
                      DesiredOutput desired, const FeedbackGains& gains, const TimeGrid& grid) {
  spec.validate();
  formation.validate();
  weights.validate();
  gains.validate();
  if (x0.size() != spec.state_dim()) {
    throw std::invalid_argument("Problem: x0 length does not match the system spec");
  }
  if (formation.n != spec.n) {
    throw std::invalid_argument("Problem: formation agent count does not match the system spec");
  }
  if (desired.M != spec.M) {
    throw std::invalid_argument("Problem: desired output dimension does not match the system");
  }
  Problem p;
  p.spec = spec;
  p.sys = build_system(spec);
  p.x0 = x0;
  p.formation = formation;
  p.weights = weights;
  p.desired = std::move(desired);
  p.gains = gains;
  p.grid = grid;
  return p;
}

double Problem::cost(const Trajectory& xi) const {
  return total_cost(xi, weights, spec, formation, desired);
}

LineSearchResult line_search(const Problem& problem, const Trajectory& xi,
                             const SearchDirection& zeta, double g_current,
                             const SolverOptions& options) {
  if (!(zeta.dg < 0.0)) {
    throw std::invalid_argument("line_search: dg must be negative, got " +
                                std::to_string(zeta.dg));
  }
  LineSearchResult out;
  double gamma = 1.0;
  while (gamma >= options.gamma_min) {
    Trajectory trial =
        project(add_scaled(xi, gamma, zeta.z, zeta.v), problem.gains, problem.sys, problem.x0);
    const double g_new = problem.cost(trial);
    if (g_new <= g_current + options.armijo_alpha * gamma * zeta.dg) {
      out.success = true;
      out.gamma = gamma;
      out.g_new = g_new;
      out.xi_new = std::move(trial);
      return out;
    }
    gamma *= options.armijo_beta;
    ++out.backtracks;
  }
  return out;  // success = false: no admissible step above gamma_min
}

namespace {

// With the safe Hessian disabled a Riccati failure is almost always an
// indefinite Q; report the first offending node alongside the original error.
[[noreturn]] void rethrow_with_psd_diagnostics(const LqData& lq, const std::string& what) {
  for (std::size_t k = 0; k < lq.Q.size(); ++k) {
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(lq.Q[k],
                                                             Eigen::EigenvaluesOnly);
    const double lo = eig.eigenvalues().minCoeff();
    if (lo < -1e-8) {
      throw std::runtime_error(what + "; Q_o is not PSD at node " + std::to_string(k) +
                               " (t = " + std::to_string(lq.grid.time(k)) +
                               ", min eigenvalue = " + std::to_string(lo) + ")");
    }
  }
  throw std::runtime_error(what);
}

}  // namespace

SolveResult solve(const Problem& problem, const SolverOptions& options) {
  options.validate();
  const int K = problem.grid.nodes();

  SolveResult result;
  result.xi = open_loop_rollout(Eigen::MatrixXd::Zero(problem.sys.N(), K), problem.grid,
                                problem.sys, problem.x0);
  double g = problem.cost(result.xi);

  for (int k = 0; k < options.max_iter; ++k) {
    const LqData lq = assemble_lq_data(result.xi, problem.weights, problem.spec,
                                       problem.formation, problem.desired, options.safe_hessian);
    SearchDirection zeta;
    try {
      const RiccatiSolution ric = riccati_sweep(lq, problem.sys);
      zeta = search_direction(lq, ric, problem.sys);
    } catch (const std::runtime_error& err) {
      if (!options.safe_hessian) rethrow_with_psd_diagnostics(lq, err.what());
      throw;
    }

    if (-zeta.dg < options.epsilon) {
      result.history.push_back({k, g, zeta.dg, 0.0, 0});
      result.status = SolveStatus::converged;
      return result;
    }

    const LineSearchResult ls = line_search(problem, result.xi, zeta, g, options);
    if (!ls.success) {
      result.history.push_back({k, g, zeta.dg, 0.0, ls.backtracks});
      result.status = SolveStatus::line_search_failed;
      return result;
    }
    result.history.push_back({k, g, zeta.dg, ls.gamma, ls.backtracks});
    result.xi = ls.xi_new;
    g = ls.g_new;
  }
  result.status = SolveStatus::max_iter_reached;
  return result;
}

}  // namespace oift
