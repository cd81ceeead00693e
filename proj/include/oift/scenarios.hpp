#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "oift/cost.hpp"
#include "oift/pronto.hpp"

namespace oift {

enum class GeneratorKind { line, tanh_s_curve, helix, constant_point };

/// Serializable description of a desired-output generator. Every generator
/// supplies the velocity half analytically.
struct TrajectoryGenerator {
  GeneratorKind kind = GeneratorKind::constant_point;
  Eigen::VectorXd start;     ///< M (line, constant_point)
  Eigen::VectorXd velocity;  ///< M (line)
  double v = 0.0;            ///< m/s (tanh_s_curve, helix)
  double r = 0.0;            ///< m (tanh_s_curve, helix)
};

/// position = start + velocity * t.
DesiredOutput gen_line(const Eigen::VectorXd& start, const Eigen::VectorXd& velocity, double T);

/// M = 2: position (v t, r tanh(t - T/2)), velocity (v, r sech^2(t - T/2)).
DesiredOutput gen_tanh(double v, double r, double T);

/// M = 3: position (r cos t, r sin t, v t), velocity (-r sin t, r cos t, v).
DesiredOutput gen_helix(double v, double r, double T);

/// Stationary target point.
DesiredOutput gen_constant(const Eigen::VectorXd& point, double T);

DesiredOutput make_desired(const TrajectoryGenerator& gen, int M, double T);

/// Uniform positions in [-radius, radius]^M per agent, zero velocities;
/// deterministic per seed.
Eigen::VectorXd deploy_random(int n, int M, double radius, std::uint64_t seed);

/// One fully specified run: system, initial state, formation, desired
/// output, weights, gains and solver options.
struct Scenario {
  std::string name;
  SystemSpec spec;
  Eigen::VectorXd x0;  ///< ignored when random_deploy is set
  FormationSpec formation;
  TrajectoryGenerator generator;
  CostWeights weights;
  FeedbackGains gains;
  SolverOptions options;
  double T = 20.0;
  double dt = 0.02;
  std::uint64_t seed = 1;
  bool random_deploy = false;
  double deploy_radius = 2.5;
  /// Invariance basis (M-vectors spanning the subspace S), empty when the
  /// scenario makes no invariance claim.
  std::vector<Eigen::VectorXd> subspace;

  void validate() const;
  Eigen::VectorXd initial_state() const;
  Problem problem() const;
};

/// The catalog of bundled reference runs: straight-line validity checks,
/// random-deployment equilibria, complex tracking and subspace invariance.
std::vector<Scenario> reference_scenarios();

/// Throws std::invalid_argument for names not in the catalog.
Scenario find_scenario(const std::string& name);

}  // namespace oift
