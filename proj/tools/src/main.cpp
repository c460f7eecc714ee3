#include <cstdlib>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "pdm/catalog.hpp"
#include "pdm_tools/artifacts.hpp"
#include "pdm_tools/config.hpp"
#include "pdm_tools/experiments.hpp"

namespace fs = std::filesystem;
using namespace pdm::tools;

namespace {

constexpr const char* kOutputEnv = "PDM_OUTPUT_DIR";

fs::path output_dir(const std::string& flag, const ExperimentConfig& config) {
  if (!flag.empty()) return flag;
  if (!config.output_dir.empty()) return config.output_dir;
  if (const char* env = std::getenv(kOutputEnv); env && *env) return env;
  return fs::path("pdm-out") / config.experiment;
}

int run(const std::string& config_path, int workers, const std::string& out_flag) {
  const ExperimentConfig config = load_config(config_path);
  const fs::path dir = output_dir(out_flag, config);
  const auto results = run_jobs(plan_jobs(config), workers);
  write_artifacts(dir, config, results);
  int failed = 0;
  for (const auto& r : results) {
    const bool ok = r.passed();
    failed += !ok;
    std::cout << (ok ? "PASS  " : "FAIL  ") << r.name;
    if (!r.completed) std::cout << "  (error: " << r.error << ")";
    std::cout << "\n";
  }
  std::cout << "artifacts in " << dir.string() << "\n";
  return failed ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete pseudo-differential matrices: experiment driver"};
  app.require_subcommand(1);

  std::string config_path, out_flag;
  int workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  auto* run_cmd = app.add_subcommand("run", "Run the experiment described by a config file");
  run_cmd->add_option("config", config_path, "Config file (flat key = value, arrays as [a, b])")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("--workers,-j", workers, "Parallel jobs; outputs do not depend on this")->check(CLI::PositiveNumber);
  run_cmd->add_option("--output,-o", out_flag,
                      std::string("Output directory (default: config output_dir, then $") + kOutputEnv + ", then pdm-out/<experiment>)");
  run_cmd->footer("Experiments: order_gain approx_rates splitting_orders loss_scan waterwave\n"
                  "             schroedinger_precond sobolev_growth invariants_suite\n\n"
                  "Writes results.csv, fits.json, plots/*.dat and manifest.json.\n"
                  "results.csv columns:\n" +
                  results_columns_help() +
                  "\n\nExit status is nonzero iff an assertion fails or a job errors.");

  std::string report_dir;
  auto* report_cmd = app.add_subcommand("report", "Check a results directory and print PASS/FAIL per assertion");
  report_cmd->add_option("dir", report_dir, "Directory written by 'run'")->required();

  auto* list_cmd = app.add_subcommand("list-probes", "List catalog symbols and potentials usable as probes");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) return run(config_path, workers, out_flag);
    if (*report_cmd) return report(report_dir, std::cout);
    if (*list_cmd) {
      for (const auto& p : pdm::catalog::list_probes()) std::cout << p.kind << "\t" << p.name << "\t" << p.description << "\n";
      std::cout << "growth\torder0\tB(t) = cos(t) M_W, W = 2 cos x, rho = 0\n"
                << "growth\torder_minus1\tB(t) = cos(t) <D>^{-1/2} M_W <D>^{-1/2}, rho = -1\n"
                << "growth\tfree\tB = 0\n";
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
