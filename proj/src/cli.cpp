#include "oift/cli.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <stdexcept>

#include <json.hpp>

#include "oift/analysis.hpp"
#include "oift/numdiff.hpp"

namespace oift {

namespace {

std::string fmt(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

std::string short_label(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", value);
  return buf;
}

std::string axis_name(int dim, int axis) {
  static const char* xyz[] = {"x", "y", "z"};
  return dim <= 3 ? xyz[axis] : std::to_string(axis);
}

void write_trajectory_csv(const std::filesystem::path& path, const Problem& problem,
                          const Trajectory& xi) {
  std::ofstream out(path);
  const int n = problem.spec.n;
  const int M = problem.spec.M;
  const int N = problem.spec.N();
  out << "# t, agent positions p_i (m), agent velocities pdot_i (m/s), inputs u_i (m/s^2), "
         "barycenter p_B (m), desired barycenter p_B_des (m)\n";
  out << "t";
  for (int i = 1; i <= n; ++i)
    for (int a = 0; a < M; ++a) out << ",p_" << i << "_" << axis_name(M, a);
  for (int i = 1; i <= n; ++i)
    for (int a = 0; a < M; ++a) out << ",pdot_" << i << "_" << axis_name(M, a);
  for (int i = 1; i <= n; ++i)
    for (int a = 0; a < M; ++a) out << ",u_" << i << "_" << axis_name(M, a);
  for (int a = 0; a < M; ++a) out << ",p_B_" << axis_name(M, a);
  for (int a = 0; a < M; ++a) out << ",p_B_des_" << axis_name(M, a);
  out << "\n";
  for (int k = 0; k < xi.grid.nodes(); ++k) {
    const double t = xi.grid.time(k);
    out << fmt(t);
    for (int c = 0; c < 2 * N; ++c) out << "," << fmt(xi.x(c, k));
    for (int c = 0; c < N; ++c) out << "," << fmt(xi.u(c, k));
    const Eigen::VectorXd xb = barycenter(xi.x.col(k), problem.spec);
    for (int a = 0; a < M; ++a) out << "," << fmt(xb[a]);
    const Eigen::VectorXd des = problem.desired(t);
    for (int a = 0; a < M; ++a) out << "," << fmt(des[a]);
    out << "\n";
  }
}

void write_iterations_csv(const std::filesystem::path& path,
                          const std::vector<IterationRecord>& history) {
  std::ofstream out(path);
  out << "k,g,dg,gamma,backtracks\n";
  for (const auto& rec : history) {
    out << rec.k << "," << fmt(rec.g) << "," << fmt(rec.dg) << "," << fmt(rec.gamma) << ","
        << rec.backtracks << "\n";
  }
}

void write_cost_terms_csv(const std::filesystem::path& path, const TimeGrid& grid,
                          const CostTermSeries& terms) {
  std::ofstream out(path);
  out << "t,l_tr,l_in,l_fo\n";
  for (int k = 0; k < grid.nodes(); ++k) {
    out << fmt(grid.time(k)) << "," << fmt(terms.tracking[k]) << "," << fmt(terms.input[k]) << ","
        << fmt(terms.formation[k]) << "\n";
  }
}

nlohmann::ordered_json provenance(const Scenario& scenario) {
  return nlohmann::ordered_json{{"seed", scenario.seed},
                                {"dt", scenario.dt},
                                {"T", scenario.T},
                                {"q_p", scenario.weights.q_p},
                                {"q_v", scenario.weights.q_v},
                                {"r_a", scenario.weights.r_a},
                                {"k_r", scenario.weights.potential.k_r},
                                {"k_a", scenario.weights.potential.k_a},
                                {"k_F", scenario.weights.k_F},
                                {"epsilon", scenario.options.epsilon},
                                {"max_iter", scenario.options.max_iter},
                                {"safe_hessian", scenario.options.safe_hessian},
                                {"k_p", scenario.gains.k_p},
                                {"k_v", scenario.gains.k_v}};
}

struct RunArtifacts {
  SolveResult result;
  ConstraintRatio phi_c;
  double terminal_tracking = 0.0;
  double final_cost = 0.0;
};

RunArtifacts execute(const Scenario& scenario, const Problem& problem,
                     const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  RunArtifacts art;
  art.result = solve(problem, scenario.options);
  const Trajectory& xi = art.result.xi;
  art.final_cost = problem.cost(xi);
  art.phi_c = constraint_ratio(xi.x.col(xi.grid.steps).head(problem.spec.N()), problem.formation);
  const Eigen::VectorXd disp = tracking_displacement(xi, problem.desired, problem.spec);
  art.terminal_tracking = disp[disp.size() - 1];

  write_trajectory_csv(dir / "trajectory.csv", problem, xi);
  write_iterations_csv(dir / "iterations.csv", art.result.history);
  write_cost_terms_csv(
      dir / "cost_terms.csv", xi.grid,
      cost_term_series(xi, problem.weights, problem.spec, problem.formation, problem.desired));

  nlohmann::ordered_json report;
  report["scenario"] = scenario.name;
  report["status"] = to_string(art.result.status);
  report["iterations"] = art.result.history.size();
  report["final_cost"] = art.final_cost;
  report["final_dg"] = art.result.history.empty() ? 0.0 : art.result.history.back().dg;
  report["phi_c"] = {{"satisfied", art.phi_c.satisfied},
                     {"total", art.phi_c.total},
                     {"ratio", art.phi_c.ratio()}};
  report["terminal_tracking_error"] = art.terminal_tracking;
  report["max_tracking_error"] = disp.maxCoeff();
  if (!scenario.subspace.empty()) {
    report["subspace_residual"] = subspace_residual(xi, scenario.subspace, problem.spec);
  }
  report["provenance"] = provenance(scenario);
  std::ofstream(dir / "metrics.json") << report.dump(2) << "\n";
  return art;
}

}  // namespace

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot read config file '" + path + "'");
  }
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& err) {
    throw std::runtime_error("malformed config '" + path + "': " + err.what());
  }
  RunConfig config;
  for (const auto& [key, value] : doc.items()) {
    if (key == "scenario") config.scenario = value.get<std::string>();
    else if (key == "dt") config.dt = value.get<double>();
    else if (key == "max_iter") config.max_iter = value.get<int>();
    else if (key == "epsilon") config.epsilon = value.get<double>();
    else if (key == "q_p") config.q_p = value.get<double>();
    else if (key == "q_v") config.q_v = value.get<double>();
    else if (key == "r_a") config.r_a = value.get<double>();
    else if (key == "k_r") config.k_r = value.get<double>();
    else if (key == "k_a") config.k_a = value.get<double>();
    else if (key == "k_F") config.k_F = value.get<double>();
    else if (key == "seed") config.seed = value.get<std::uint64_t>();
    else if (key == "safe_hessian") config.safe_hessian = value.get<bool>();
    else if (key == "output_dir") config.output_dir = value.get<std::string>();
    else throw std::runtime_error("config '" + path + "': unknown key '" + key + "'");
  }
  if (config.scenario.empty()) {
    throw std::runtime_error("config '" + path + "': missing 'scenario'");
  }
  return config;
}

RunConfig resolve_config(const std::string& token) {
  if (std::filesystem::exists(token) && std::filesystem::is_regular_file(token)) {
    return load_config_file(token);
  }
  RunConfig config;
  config.scenario = token;
  return config;
}

Scenario configured_scenario(const RunConfig& config) {
  Scenario scenario = find_scenario(config.scenario);
  if (config.dt) scenario.dt = *config.dt;
  if (config.max_iter) scenario.options.max_iter = *config.max_iter;
  if (config.epsilon) scenario.options.epsilon = *config.epsilon;
  if (config.q_p) scenario.weights.q_p = *config.q_p;
  if (config.q_v) scenario.weights.q_v = *config.q_v;
  if (config.r_a) scenario.weights.r_a = *config.r_a;
  if (config.k_r) scenario.weights.potential.k_r = *config.k_r;
  if (config.k_a) scenario.weights.potential.k_a = *config.k_a;
  if (config.k_F) scenario.weights.k_F = *config.k_F;
  if (config.seed) scenario.seed = *config.seed;
  if (config.safe_hessian) scenario.options.safe_hessian = *config.safe_hessian;
  scenario.validate();
  return scenario;
}

namespace {

std::filesystem::path output_root(const RunConfig& config, const Scenario& scenario) {
  if (!config.output_dir.empty()) return config.output_dir;
  if (const char* env = std::getenv("OIFT_OUT_DIR")) {
    return std::filesystem::path(env) / scenario.name;
  }
  return std::filesystem::path("oift_out") / scenario.name;
}

}  // namespace

int cmd_run(const RunConfig& config) {
  const Scenario scenario = configured_scenario(config);
  const Problem problem = scenario.problem();
  const std::filesystem::path dir = output_root(config, scenario);
  const RunArtifacts art = execute(scenario, problem, dir);
  std::cout << "scenario=" << scenario.name << " status=" << to_string(art.result.status)
            << " iterations=" << art.result.history.size() << " g=" << art.final_cost
            << " phi_c=" << art.phi_c.satisfied << "/" << art.phi_c.total
            << " terminal_tracking=" << art.terminal_tracking << " m"
            << " out=" << dir.string() << "\n";
  return art.result.status == SolveStatus::line_search_failed ? 3 : 0;
}

namespace {

enum class CheckOutcome { pass, fail, xfail };

struct CheckRow {
  std::string name;
  CheckOutcome outcome;
  double measured;
  double tolerance;
  std::string note;
};

void print_row(const CheckRow& row) {
  const char* tag = row.outcome == CheckOutcome::pass    ? "PASS "
                    : row.outcome == CheckOutcome::xfail ? "XFAIL"
                                                         : "FAIL ";
  std::printf("[%s] %-28s measured=%-12.4g tol=%-10.3g %s\n", tag, row.name.c_str(), row.measured,
              row.tolerance, row.note.c_str());
}

double rel_err(const Eigen::MatrixXd& got, const Eigen::MatrixXd& ref) {
  return (got - ref).cwiseAbs().maxCoeff() / (1.0 + ref.cwiseAbs().maxCoeff());
}

}  // namespace

int cmd_check(const RunConfig& config) {
  const Scenario scenario = configured_scenario(config);
  const Problem problem = scenario.problem();
  const int N = problem.spec.N();
  std::vector<CheckRow> rows;

  // Potential properties on each distinct edge distance.
  {
    double worst_junction = 0.0;
    bool signs_ok = true;
    for (const auto& e : problem.formation.edges) {
      const double d2 = e.d * e.d;
      for (int i = 0; i <= 400; ++i) {
        const double s = d2 * (4.0 * i / 400.0);
        const double val = sigma(s, e.d, problem.weights.potential);
        const double sp = sigma_prime(s, e.d, problem.weights.potential);
        const double spp = sigma_second(s, e.d, problem.weights.potential);
        signs_ok = signs_ok && val >= 0.0 && spp >= -1e-15 &&
                   (s <= d2 ? sp <= 1e-15 : sp >= -1e-15);
      }
      const PotentialParams& pp = problem.weights.potential;
      worst_junction = std::max(
          {worst_junction, std::abs(sigma(d2 - 1e-8, e.d, pp)), std::abs(sigma(d2 + 1e-8, e.d, pp)),
           std::abs(sigma_prime(d2 - 1e-8, e.d, pp)), std::abs(sigma_prime(d2 + 1e-8, e.d, pp)),
           std::abs(sigma_second(d2 - 1e-8, e.d, pp)),
           std::abs(sigma_second(d2 + 1e-8, e.d, pp))});
    }
    rows.push_back({"sigma_properties", signs_ok && worst_junction < 1e-6 ? CheckOutcome::pass
                                                                          : CheckOutcome::fail,
                    worst_junction, 1e-6, "sign pattern + junction"});
  }

  const Eigen::VectorXd p0 = problem.x0.head(N);
  const auto fo_cost = [&](const Eigen::VectorXd& p) {
    return formation_cost(p, problem.formation, problem.weights.k_F, problem.weights.potential);
  };

  {
    const Eigen::VectorXd g =
        formation_gradient(p0, problem.formation, problem.weights.k_F, problem.weights.potential);
    const double err = rel_err(g, numdiff::gradient(fo_cost, p0));
    rows.push_back(
        {"formation_gradient_fd", err < 1e-5 ? CheckOutcome::pass : CheckOutcome::fail, err, 1e-5,
         ""});
  }
  {
    const Eigen::MatrixXd H = formation_hessian(p0, problem.formation, problem.weights.k_F,
                                                problem.weights.potential, false);
    const double err = rel_err(H, numdiff::hessian(fo_cost, p0));
    rows.push_back({"formation_hessian_fd", err < 1e-4 ? CheckOutcome::pass : CheckOutcome::fail,
                    err, 1e-4, "exact mode"});
  }

  const Trajectory xi0 = open_loop_rollout(Eigen::MatrixXd::Zero(N, problem.grid.nodes()),
                                           problem.grid, problem.sys, problem.x0);
  const LqData lq = assemble_lq_data(xi0, problem.weights, problem.spec, problem.formation,
                                     problem.desired, scenario.options.safe_hessian);
  {
    double min_eig = 0.0;
    for (const auto& Q : lq.Q) {
      const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(Q, Eigen::EigenvaluesOnly);
      min_eig = std::min(min_eig, eig.eigenvalues().minCoeff());
    }
    CheckRow row{"q_o_psd", CheckOutcome::pass, min_eig, -1e-8, ""};
    if (scenario.options.safe_hessian) {
      row.note = "safe mode";
      if (min_eig < -1e-8) row.outcome = CheckOutcome::fail;
    } else {
      row.note = "exact mode";
      if (min_eig < -1e-8) {
        row.outcome = CheckOutcome::xfail;
        row.note = "exact Hessian indefinite with repelling pairs, as expected";
      }
    }
    rows.push_back(row);
  }

  {
    const double t0 = 0.0;
    const Eigen::VectorXd x = xi0.x.col(0);
    const Eigen::VectorXd u = Eigen::VectorXd::Constant(N, 0.3);
    const auto l_of_x = [&](const Eigen::VectorXd& xx) {
      return instantaneous_cost(xx, u, t0, problem.weights, problem.spec, problem.formation,
                                problem.desired);
    };
    const auto l_of_u = [&](const Eigen::VectorXd& uu) {
      return instantaneous_cost(x, uu, t0, problem.weights, problem.spec, problem.formation,
                                problem.desired);
    };
    Trajectory probe = xi0;
    probe.u.col(0) = u;
    const LqData lq_probe = assemble_lq_data(probe, problem.weights, problem.spec,
                                             problem.formation, problem.desired, false);
    const double err_a = rel_err(lq_probe.a[0], numdiff::gradient(l_of_x, x));
    const double err_b = rel_err(lq_probe.b[0], numdiff::gradient(l_of_u, u));
    const double err = std::max(err_a, err_b);
    rows.push_back(
        {"lq_ab_gradient_fd", err < 1e-5 ? CheckOutcome::pass : CheckOutcome::fail, err, 1e-5, ""});
  }

  {
    const Trajectory once = project(xi0.as_curve(), problem.gains, problem.sys, problem.x0);
    const Trajectory twice = project(once.as_curve(), problem.gains, problem.sys, problem.x0);
    const double err = (twice.x - once.x).cwiseAbs().maxCoeff();
    rows.push_back({"projection_idempotence", err < 1e-6 ? CheckOutcome::pass : CheckOutcome::fail,
                    err, 1e-6, ""});
  }
  {
    const double defect = trajectory_defect(xi0);
    rows.push_back({"trajectory_defect", defect < 1e-9 ? CheckOutcome::pass : CheckOutcome::fail,
                    defect, 1e-9, "zero-input rollout"});
  }

  int failures = 0;
  int expected_failures = 0;
  for (const auto& row : rows) {
    print_row(row);
    if (row.outcome == CheckOutcome::fail) ++failures;
    if (row.outcome == CheckOutcome::xfail) ++expected_failures;
  }
  std::printf("%zu/%zu checks passed (%d expected-failure)\n",
              rows.size() - failures - expected_failures, rows.size(), expected_failures);
  return failures == 0 ? 0 : 1;
}

int cmd_sweep(const RunConfig& config, const std::string& parameter,
              const std::vector<double>& values) {
  static const std::vector<std::string> known = {"q_p", "q_v", "r_a",     "k_r",     "k_a",
                                                 "k_F", "dt",  "epsilon", "max_iter", "seed"};
  if (std::find(known.begin(), known.end(), parameter) == known.end()) {
    throw std::invalid_argument("cmd_sweep: unknown parameter '" + parameter + "'");
  }
  if (values.empty()) {
    throw std::invalid_argument("cmd_sweep: empty value list");
  }
  const Scenario base = configured_scenario(config);
  const std::filesystem::path root = output_root(config, base);
  std::filesystem::create_directories(root);
  std::ofstream summary(root / "sweep_summary.csv");
  summary << "parameter,value,status,iterations,final_g,phi_c,terminal_tracking_error\n";

  for (double value : values) {
    RunConfig per_run = config;
    if (parameter == "q_p") per_run.q_p = value;
    else if (parameter == "q_v") per_run.q_v = value;
    else if (parameter == "r_a") per_run.r_a = value;
    else if (parameter == "k_r") per_run.k_r = value;
    else if (parameter == "k_a") per_run.k_a = value;
    else if (parameter == "k_F") per_run.k_F = value;
    else if (parameter == "dt") per_run.dt = value;
    else if (parameter == "epsilon") per_run.epsilon = value;
    else if (parameter == "max_iter") per_run.max_iter = static_cast<int>(value);
    else if (parameter == "seed") per_run.seed = static_cast<std::uint64_t>(value);

    const Scenario scenario = configured_scenario(per_run);
    const Problem problem = scenario.problem();
    const RunArtifacts art =
        execute(scenario, problem, root / (parameter + "_" + short_label(value)));
    summary << parameter << "," << fmt(value) << "," << to_string(art.result.status) << ","
            << art.result.history.size() << "," << fmt(art.final_cost) << ","
            << art.phi_c.satisfied << "/" << art.phi_c.total << "," << fmt(art.terminal_tracking)
            << "\n";
    std::cout << parameter << "=" << value << " status=" << to_string(art.result.status)
              << " iterations=" << art.result.history.size() << " g=" << art.final_cost
              << " phi_c=" << art.phi_c.satisfied << "/" << art.phi_c.total
              << " terminal_tracking=" << art.terminal_tracking << "\n";
  }
  return 0;
}

}  // namespace oift
