// mmt: run, check and list transfer scenarios.
//
// Exit codes: 0 pass, 2 a tolerance check failed, 1 any error.

#include <cstdlib>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "mmt/congruences.hpp"
#include "mmt/metrics.hpp"
#include "mmt/scenario.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitError = 1;
constexpr int kExitToleranceFailure = 2;

std::filesystem::path output_dir(const mmt::ScenarioConfig& cfg, const std::string& flag) {
  if (!flag.empty()) return flag;
  if (cfg.output_dir) return *cfg.output_dir;
  if (const char* root = std::getenv("MMT_OUT_DIR"); root && *root)
    return std::filesystem::path(root) / cfg.name;
  return std::filesystem::path("mmt-out") / cfg.name;
}

void print_catalog() {
  std::cout << "metrics:\n";
  for (const auto& e : mmt::metrics::catalog())
    std::cout << "  " << e.name << " (" << e.parameters << "): " << e.description << '\n';
  std::cout << "congruences:\n";
  for (const auto& e : mmt::congruences::catalog())
    std::cout << "  " << e.name << " (" << e.parameters << "): " << e.description << '\n';
  std::cout << "templates:\n";
  for (const auto& t : mmt::scenario_templates())
    std::cout << "  " << t.name << ": " << t.description << '\n';
}

int run(const std::string& path, const std::string& out, std::optional<double> h,
        std::optional<double> tau_max) {
  mmt::ScenarioConfig cfg = mmt::load_config(path);
  if (h) cfg.h = *h;
  if (tau_max) cfg.tau_max = *tau_max;
  mmt::validate_config(cfg);

  const mmt::ScenarioReport report = mmt::run_scenario(cfg);
  for (const auto& p : mmt::emit_report(report, output_dir(cfg, out)))
    std::cout << "wrote " << p.string() << '\n';

  const mmt::ScenarioSummary& s = report.summary;
  std::cout << "max ode_residual " << mmt::format_double(s.max_ode_residual) << '\n'
            << "max mapping_residual " << mmt::format_double(s.max_mapping_residual) << '\n'
            << "factorization_discrepancy " << mmt::format_double(s.factorization_discrepancy)
            << '\n'
            << "max symplectic_defect " << mmt::format_double(s.max_symplectic_defect) << '\n'
            << (s.pass ? "PASS" : "FAIL") << '\n';
  return s.pass ? kExitPass : kExitToleranceFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Transfer maps between quadratic Hamiltonian systems along worldlines"};
  app.require_subcommand(1);

  std::string run_path, out;
  std::optional<double> h, tau_max;
  auto* run_cmd = app.add_subcommand("run", "run a scenario and write its report");
  run_cmd->set_help_flag("--help", "print this help and exit");
  run_cmd->add_option("config", run_path, "scenario config file")->required();
  run_cmd->add_option("--out", out, "output directory");
  run_cmd->add_option("--h", h, "integration step (overrides integration.h)");
  run_cmd->add_option("--tau-max", tau_max, "final proper time (overrides integration.tau_max)");

  std::string check_path;
  auto* check_cmd = app.add_subcommand("check", "parse and validate a scenario config");
  check_cmd->add_option("config", check_path, "scenario config file")->required();

  auto* catalog_cmd =
      app.add_subcommand("catalog", "list built-in metrics, congruences and scenario templates");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitError;
  }

  try {
    if (*catalog_cmd) {
      print_catalog();
      return kExitPass;
    }
    if (*check_cmd) {
      std::cout << mmt::echo_config(mmt::load_config(check_path));
      return kExitPass;
    }
    if (*run_cmd) return run(run_path, out, h, tau_max);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
