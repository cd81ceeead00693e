#include "oift/scenarios.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace oift {

namespace {

Eigen::VectorXd stack(std::initializer_list<std::initializer_list<double>> agents) {
  std::vector<double> flat;
  for (const auto& a : agents) flat.insert(flat.end(), a.begin(), a.end());
  return Eigen::Map<const Eigen::VectorXd>(flat.data(), static_cast<Eigen::Index>(flat.size()));
}

Eigen::VectorXd make_state(const Eigen::VectorXd& p, const Eigen::VectorXd& pdot) {
  Eigen::VectorXd x(p.size() + pdot.size());
  x << p, pdot;
  return x;
}

}  // namespace

DesiredOutput gen_line(const Eigen::VectorXd& start, const Eigen::VectorXd& velocity, double T) {
  if (start.size() != velocity.size() || start.size() < 1 || start.size() > 3) {
    throw std::invalid_argument("gen_line: start/velocity must share a dimension in 1..3");
  }
  const int M = static_cast<int>(start.size());
  return DesiredOutput{M, T, [start, velocity, M](double t) {
                         Eigen::VectorXd out(2 * M);
                         out.head(M) = start + velocity * t;
                         out.tail(M) = velocity;
                         return out;
                       }};
}

DesiredOutput gen_tanh(double v, double r, double T) {
  return DesiredOutput{2, T, [v, r, T](double t) {
                         const double sech = 1.0 / std::cosh(t - T / 2.0);
                         Eigen::VectorXd out(4);
                         out << v * t, r * std::tanh(t - T / 2.0), v, r * sech * sech;
                         return out;
                       }};
}

DesiredOutput gen_helix(double v, double r, double T) {
  return DesiredOutput{3, T, [v, r](double t) {
                         Eigen::VectorXd out(6);
                         out << r * std::cos(t), r * std::sin(t), v * t,
                             -r * std::sin(t), r * std::cos(t), v;
                         return out;
                       }};
}

DesiredOutput gen_constant(const Eigen::VectorXd& point, double T) {
  const int M = static_cast<int>(point.size());
  return DesiredOutput{M, T, [point, M](double) {
                         Eigen::VectorXd out = Eigen::VectorXd::Zero(2 * M);
                         out.head(M) = point;
                         return out;
                       }};
}

DesiredOutput make_desired(const TrajectoryGenerator& gen, int M, double T) {
  switch (gen.kind) {
    case GeneratorKind::line:
      if (gen.start.size() != M) break;
      return gen_line(gen.start, gen.velocity, T);
    case GeneratorKind::tanh_s_curve:
      if (M != 2) break;
      return gen_tanh(gen.v, gen.r, T);
    case GeneratorKind::helix:
      if (M != 3) break;
      return gen_helix(gen.v, gen.r, T);
    case GeneratorKind::constant_point:
      if (gen.start.size() != M) break;
      return gen_constant(gen.start, T);
  }
  throw std::invalid_argument("make_desired: generator parameters do not match M = " +
                              std::to_string(M));
}

Eigen::VectorXd deploy_random(int n, int M, double radius, std::uint64_t seed) {
  if (!(radius > 0.0)) {
    throw std::invalid_argument("deploy_random: radius must be > 0");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(-radius, radius);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(2 * n * M);
  for (int i = 0; i < n * M; ++i) {
    x[i] = coord(rng);
  }
  return x;
}

void Scenario::validate() const {
  spec.validate();
  formation.validate();
  weights.validate();
  gains.validate();
  options.validate();
  TimeGrid(T, dt);  // throws unless dt divides T
  if (formation.n != spec.n) {
    throw std::invalid_argument("Scenario: formation/system agent counts differ");
  }
  if (!random_deploy && x0.size() != spec.state_dim()) {
    throw std::invalid_argument("Scenario: x0 length does not match the system");
  }
  for (const auto& b : subspace) {
    if (b.size() != spec.M) {
      throw std::invalid_argument("Scenario: subspace basis vectors must have length M");
    }
  }
}

Eigen::VectorXd Scenario::initial_state() const {
  return random_deploy ? deploy_random(spec.n, spec.M, deploy_radius, seed) : x0;
}

Problem Scenario::problem() const {
  validate();
  return Problem::make(spec, initial_state(), formation, weights,
                       make_desired(generator, spec.M, T), gains, TimeGrid(T, dt));
}

namespace {

TrajectoryGenerator line_generator(const Eigen::VectorXd& start, const Eigen::VectorXd& velocity) {
  TrajectoryGenerator gen;
  gen.kind = GeneratorKind::line;
  gen.start = start;
  gen.velocity = velocity;
  return gen;
}

// Line through the initial barycenter along the initial mean-velocity
// direction at unit speed.
TrajectoryGenerator validity_line(const Eigen::VectorXd& x0, int n, int M) {
  const Eigen::VectorXd p_b = mean_position(x0.head(n * M), n, M);
  const Eigen::VectorXd v_b = mean_position(x0.tail(n * M), n, M);
  if (v_b.norm() < 1e-12) {
    throw std::invalid_argument("validity_line: initial mean velocity is zero");
  }
  return line_generator(p_b, v_b / v_b.norm());
}

Scenario base_scenario(std::string name, int n, int M) {
  Scenario s;
  s.name = std::move(name);
  s.spec = SystemSpec{n, M};
  s.formation = FormationSpec::complete(n, 5.0);
  s.weights = CostWeights{10.0, 1.0, 1.0, 0.1, PotentialParams{100.0, 1.0}};
  s.gains = default_gains();
  s.options.max_iter = 50;
  s.options.epsilon = 1e-8;
  return s;
}

Scenario equilibria_scenario(int M, int n) {
  Scenario s = base_scenario("equilibria_" + std::to_string(M) + "_" + std::to_string(n), n, M);
  s.random_deploy = true;
  s.deploy_radius = 2.5;
  s.options.max_iter = 100;
  TrajectoryGenerator gen;
  gen.kind = GeneratorKind::constant_point;
  gen.start = Eigen::VectorXd::Zero(M);
  s.generator = gen;
  return s;
}

}  // namespace

std::vector<Scenario> reference_scenarios() {
  std::vector<Scenario> catalog;

  {
    Scenario s = base_scenario("valid2d", 3, 2);
    s.x0 = make_state(stack({{-2, 1}, {-3, -1}, {2, -2}}),
                      stack({{0, -5}, {0, -5}, {0, -5}}));
    s.generator = validity_line(s.x0, 3, 2);
    catalog.push_back(std::move(s));
  }
  {
    Scenario s = base_scenario("valid3d", 4, 3);
    s.x0 = make_state(stack({{-2, 1, 0}, {-3, -1, 1}, {2, -2, 2}, {1, 3, 3}}),
                      stack({{0, -5, 5}, {0, -5, 0}, {0, -5, 10}, {0, 0, 0}}));
    s.generator = validity_line(s.x0, 4, 3);
    catalog.push_back(std::move(s));
  }

  for (int M : {2, 3}) {
    for (int n : {5, 6, 8}) {
      catalog.push_back(equilibria_scenario(M, n));
    }
  }

  {
    Scenario s = base_scenario("tanh_triangle", 3, 2);
    s.x0 = make_state(stack({{-0.5, -0.5}, {0, 0}, {6, 6}}), Eigen::VectorXd::Zero(6));
    s.formation.edges = {{1, 2, 3.0}, {1, 3, 4.0}, {2, 3, 5.0}};
    s.weights.q_p = 100.0;
    s.generator.kind = GeneratorKind::tanh_s_curve;
    s.generator.v = 1.0;
    s.generator.r = 2.0;
    catalog.push_back(std::move(s));
  }
  {
    Scenario s = base_scenario("helix_square", 4, 3);
    s.x0 = make_state(stack({{-5, -5, 0}, {0, 0, 2}, {6, 6, 0}, {-2, 2, 0}}),
                      Eigen::VectorXd::Zero(12));
    const double diag = 5.0 * std::sqrt(2.0);
    s.formation.edges = {{1, 2, 5.0}, {2, 3, 5.0}, {3, 4, 5.0}, {1, 4, 5.0},
                         {1, 3, diag}, {2, 4, diag}};
    s.weights.q_p = 100.0;
    s.generator.kind = GeneratorKind::helix;
    s.generator.v = 2.0;
    s.generator.r = 15.0;
    catalog.push_back(std::move(s));
  }

  {
    Scenario s = base_scenario("subspace1d", 3, 2);
    s.x0 = make_state(stack({{-1, 0}, {0, 0}, {1, 0}}), Eigen::VectorXd::Zero(6));
    s.generator = line_generator(stack({{0, 0}}), stack({{1, 0}}));
    s.subspace = {stack({{1, 0}})};
    catalog.push_back(std::move(s));
  }
  {
    Scenario s = base_scenario("subspace2d", 4, 3);
    s.x0 = make_state(stack({{-1, 0, 0}, {0, 0, 0}, {1, 0, 0}, {2, 0, 0}}),
                      Eigen::VectorXd::Zero(12));
    const double inv = 1.0 / std::sqrt(5.0);
    s.generator = line_generator(stack({{0.5, 0, 0}}), stack({{2.0 * inv, inv, 0}}));
    s.subspace = {stack({{1, 0, 0}}), stack({{0, 1, 0}})};
    catalog.push_back(std::move(s));
  }

  for (auto& s : catalog) s.validate();
  return catalog;
}

Scenario find_scenario(const std::string& name) {
  for (auto& s : reference_scenarios()) {
    if (s.name == name) return s;
  }
  throw std::invalid_argument("find_scenario: unknown scenario '" + name + "'");
}

}  // namespace oift
