#pragma once

#include <Eigen/Core>
#include <optional>
#include <vector>

namespace oift {

/// Gains of the repulsive/attractive distance potential.
struct PotentialParams {
  double k_r = 100.0;  ///< repulsion gain, > 0
  double k_a = 1.0;    ///< attraction gain, > 0

  void validate() const;
};

/// Piecewise potential of the squared inter-agent distance s = r^2:
///
///   sigma(s) = k_r (1 - s/d^2)^3          0 <= s <= d^2
///            = k_a (sqrt(s)/d - 1)^3      s >= d^2
///
/// C^2 with a unique global minimum sigma(d^2) = 0. The junction s = d^2
/// is evaluated through the repulsive branch; both branches and their
/// first two derivatives vanish there.
double sigma(double s, double d, const PotentialParams& params);
double sigma_prime(double s, double d, const PotentialParams& params);
double sigma_second(double s, double d, const PotentialParams& params);

/// One undirected distance constraint r_ij = d between agents i < j (1-based).
struct FormationEdge {
  int i = 0;
  int j = 0;
  double d = 0.0;  ///< desired distance, m
};

/// Desired formation as a weighted edge list. Partial graphs are allowed;
/// formation sums run over the listed edges only.
struct FormationSpec {
  int n = 0;  ///< agent count
  std::vector<FormationEdge> edges;

  /// All n(n-1)/2 pairs at the common distance d.
  static FormationSpec complete(int n, double d);

  void validate() const;

  /// Desired distance for the unordered pair (i, j), if specified.
  std::optional<double> distance(int i, int j) const;

  /// Like distance() but throws when the pair is not in the edge set.
  double required_distance(int i, int j) const;
};

/// Formation cost, gradient and position-position Hessian in one evaluation.
/// The Hessian flag records which variant was assembled.
struct FormationDerivatives {
  double value = 0.0;
  Eigen::VectorXd grad_p;   ///< N
  Eigen::MatrixXd hess_pp;  ///< N x N, symmetric
  bool safe = false;        ///< true: Gershgorin-safe PSD variant
};

/// l^fo(p) = (k_F/2) sum_i sum_{j != i} sigma_{d_ij}(r_ij^2); each listed
/// undirected edge therefore contributes k_F * sigma once.
double formation_cost(const Eigen::VectorXd& p, const FormationSpec& spec, double k_F,
                      const PotentialParams& params);

/// Stacked gradient, per agent: grad_{p_i} = 2 k_F sum_j sigma'(s_ij)(p_i - p_j).
Eigen::VectorXd formation_gradient(const Eigen::VectorXd& p, const FormationSpec& spec, double k_F,
                                   const PotentialParams& params);

/// Exact mode (safe = false): off-diagonal blocks
///   H_{p_i p_j} = -2 k_F [ 2 sigma''(s_ij) Pi_ij + sigma'(s_ij) I_M ]
/// with Pi_ij = (p_i - p_j)(p_i - p_j)^T, diagonal blocks the negative sum
/// of the off-diagonals. Safe mode drops the sigma' identity term whenever
/// sigma' <= 0 (repelling pair), which makes every edge contribution, and
/// hence the assembled matrix, positive semidefinite.
Eigen::MatrixXd formation_hessian(const Eigen::VectorXd& p, const FormationSpec& spec, double k_F,
                                  const PotentialParams& params, bool safe);

FormationDerivatives formation_derivatives(const Eigen::VectorXd& p, const FormationSpec& spec,
                                           double k_F, const PotentialParams& params, bool safe);

}  // namespace oift
