#include <CLI11.hpp>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "oift/cli.hpp"

namespace {

struct CommonFlags {
  std::string target;
  std::optional<double> dt, epsilon, q_p, q_v, r_a, k_r, k_a, k_F;
  std::optional<int> max_iter;
  std::optional<std::uint64_t> seed;
  std::string safe_hessian;
  std::string out;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("scenario", flags.target, "catalog scenario name or JSON config path")
      ->required();
  cmd->add_option("--dt", flags.dt, "grid step, s");
  cmd->add_option("--max-iter", flags.max_iter, "iteration cap");
  cmd->add_option("--epsilon", flags.epsilon, "termination threshold on -Dg.zeta");
  cmd->add_option("--seed", flags.seed, "random deployment seed");
  cmd->add_option("--q-p", flags.q_p, "barycenter position weight");
  cmd->add_option("--q-v", flags.q_v, "barycenter velocity weight");
  cmd->add_option("--r-a", flags.r_a, "input weight");
  cmd->add_option("--k-r", flags.k_r, "repulsion gain");
  cmd->add_option("--k-a", flags.k_a, "attraction gain");
  cmd->add_option("--k-f", flags.k_F, "formation weight");
  cmd->add_option("--safe-hessian", flags.safe_hessian, "on|off")
      ->check(CLI::IsMember({"on", "off"}));
  cmd->add_option("--out", flags.out, "output directory");
}

oift::RunConfig to_config(const CommonFlags& flags) {
  oift::RunConfig config = oift::resolve_config(flags.target);
  if (flags.dt) config.dt = flags.dt;
  if (flags.max_iter) config.max_iter = flags.max_iter;
  if (flags.epsilon) config.epsilon = flags.epsilon;
  if (flags.seed) config.seed = flags.seed;
  if (flags.q_p) config.q_p = flags.q_p;
  if (flags.q_v) config.q_v = flags.q_v;
  if (flags.r_a) config.r_a = flags.r_a;
  if (flags.k_r) config.k_r = flags.k_r;
  if (flags.k_a) config.k_a = flags.k_a;
  if (flags.k_F) config.k_F = flags.k_F;
  if (!flags.safe_hessian.empty()) config.safe_hessian = flags.safe_hessian == "on";
  if (!flags.out.empty()) config.output_dir = flags.out;
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimal time-invariant formation tracking via a projection operator Newton method"};
  app.require_subcommand(1);

  CommonFlags run_flags, check_flags, sweep_flags;
  CLI::App* run = app.add_subcommand("run", "solve a scenario and write run artifacts");
  add_common(run, run_flags);
  CLI::App* check = app.add_subcommand("check", "derivative/PSD/projection validation suite");
  add_common(check, check_flags);
  CLI::App* sweep = app.add_subcommand("sweep", "run a scenario across parameter values");
  add_common(sweep, sweep_flags);
  std::string sweep_param;
  std::vector<double> sweep_values;
  sweep->add_option("--param", sweep_param, "parameter to sweep")->required();
  sweep->add_option("--values", sweep_values, "comma separated values")
      ->required()
      ->delimiter(',');

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return oift::cmd_run(to_config(run_flags));
    if (check->parsed()) return oift::cmd_check(to_config(check_flags));
    if (sweep->parsed()) return oift::cmd_sweep(to_config(sweep_flags), sweep_param, sweep_values);
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 2;
  }
  return 2;
}
