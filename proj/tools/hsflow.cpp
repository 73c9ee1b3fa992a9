// hsflow: simulate the constant-mean-curvature H-surface heat flow, evaluate
// blow-up criteria and check concavity of sampled functions.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "hsflow/app.hpp"

namespace {

void add_run_flags(CLI::App* cmd, hsflow::CommandOptions& opt, std::string& lambda1,
                   int& record_every) {
  cmd->add_option("--config", opt.config_path, "JSON run configuration")->required();
  cmd->add_option("--out-dir", opt.out_dir, "Output directory (overrides config)");
  cmd->add_option("--lambda1", lambda1, "Eigenvalue used in criteria")
      ->check(CLI::IsMember({"discrete", "continuum"}));
  cmd->add_option("--record-every", record_every, "Snapshot cadence in accepted steps")
      ->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Heat flow of constant mean curvature H-surfaces: simulation and blow-up diagnostics"};
  app.require_subcommand(1);

  hsflow::CommandOptions opt;
  std::string lambda1;
  int record_every = 0;

  auto* simulate = app.add_subcommand("simulate", "Run the flow and write trace + certificate");
  add_run_flags(simulate, opt, lambda1, record_every);
  auto* check = app.add_subcommand("check-criterion", "Evaluate blow-up criteria at t = 0");
  add_run_flags(check, opt, lambda1, record_every);
  auto* sweep = app.add_subcommand("sweep", "Run a parameter sweep");
  add_run_flags(sweep, opt, lambda1, record_every);

  std::string csv;
  double theta = 1.0;
  auto* conc = app.add_subcommand("concavity-check", "Check psi'' psi - (1+theta) psi'^2 >= 0");
  conc->add_option("--csv", csv, "CSV of (t, psi) samples")->required();
  conc->add_option("--theta", theta, "theta > 0")->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  if (!lambda1.empty()) opt.lambda1 = hsflow::parse_lambda1_choice(lambda1);
  if (record_every > 0) opt.record_every = record_every;

  if (*simulate) return hsflow::cmd_simulate(opt, std::cout, std::cerr);
  if (*check) return hsflow::cmd_check_criterion(opt, std::cout, std::cerr);
  if (*sweep) return hsflow::cmd_sweep(opt, std::cout, std::cerr);
  if (*conc) return hsflow::cmd_concavity(csv, theta, std::cout, std::cerr);
  return 1;
}
