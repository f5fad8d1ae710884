// Command-line front end: run, order-study, drift, fixtures.
#include <cstdio>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "pint/harness.hpp"
#include "pint/reference.hpp"

namespace {

enum Exit { kOk = 0, kConfig = 2, kNumerical = 3, kFixture = 4 };

void print_drift(const pint::DriftSummary& d) {
  std::printf("steps            %d\n", d.steps);
  std::printf("max |dH|         %.6e\n", d.max_energy_drift);
  for (std::size_t c = 0; c < d.max_casimir_drift.size(); ++c) {
    std::printf("max |dC%zu|        %.6e\n", c, d.max_casimir_drift[c]);
  }
  std::printf("final log|x|     %.17g\n", d.final_log_norm);
  std::printf("newton iterations");
  for (const auto& [iters, count] : d.newton_histogram) std::printf("  %d:%d", iters, count);
  std::printf("\n");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pint: Hamiltonian Poisson integrators"};
  app.require_subcommand(1);
  std::string out = ".";
  bool quiet = false;

  std::string config_path;
  auto* run_cmd = app.add_subcommand("run", "integrate a config and write the requested outputs");
  run_cmd->add_option("config", config_path, "JSON run config")->required();
  run_cmd->add_option("--out", out, "output directory");
  run_cmd->add_flag("--quiet", quiet, "suppress the summary");

  auto* study_cmd = app.add_subcommand("order-study", "convergence study from the config's order_study section");
  study_cmd->add_option("config", config_path, "JSON run config")->required();
  study_cmd->add_option("--out", out, "output directory");
  study_cmd->add_flag("--quiet", quiet, "suppress the table");

  std::string csv_path;
  auto* drift_cmd = app.add_subcommand("drift", "summarise a trajectory.csv");
  drift_cmd->add_option("trajectory", csv_path, "trajectory CSV")->required();
  drift_cmd->add_option("--out", out, "output directory for drift.json");
  drift_cmd->add_flag("--quiet", quiet, "suppress the summary");

  std::string fixture_dir = "fixtures";
  auto* fix_cmd = app.add_subcommand("fixtures", "re-run the regression fixtures");
  fix_cmd->add_option("--dir", fixture_dir, "fixture directory");
  fix_cmd->add_flag("--quiet", quiet, "only report failures");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfig;
  }

  try {
    if (*run_cmd) {
      const auto cfg = pint::load_config(config_path);
      const auto record = pint::run(cfg);
      const auto files = pint::write_outputs(cfg, record, out);
      if (!quiet) {
        print_drift(pint::drift_report(record));
        for (const auto& f : files) std::printf("wrote %s\n", f.string().c_str());
      }
    } else if (*study_cmd) {
      const auto cfg = pint::load_config(config_path);
      if (!cfg.order_study) throw pint::ConfigError("config has no 'order_study' section");
      const auto result = pint::order_study(cfg, *cfg.order_study);
      std::filesystem::create_directories(out);
      const auto path = std::filesystem::path(out) / "order_study.json";
      std::ofstream(path) << pint::to_json(result).dump(2) << "\n";
      if (!quiet) {
        for (std::size_t i = 0; i < result.dts.size(); ++i) {
          std::printf("%-12.6g %.6e\n", result.dts[i], result.errors[i]);
        }
        std::printf("slope %.4f\n", result.slope);
      }
    } else if (*drift_cmd) {
      const auto summary = pint::drift_report(pint::read_csv(csv_path));
      std::filesystem::create_directories(out);
      std::ofstream(std::filesystem::path(out) / "drift.json") << pint::to_json(summary).dump(2) << "\n";
      if (!quiet) print_drift(summary);
    } else if (*fix_cmd) {
      const auto results = pint::run_fixtures(fixture_dir);
      bool all = true;
      for (const auto& r : results) {
        all = all && r.passed;
        if (!quiet || !r.passed) {
          std::printf("%s %s measured %.3e tolerance %.1e%s%s\n", r.passed ? "PASS" : "FAIL", r.name.c_str(),
                      r.measured, r.tolerance, r.detail.empty() ? "" : "  ", r.detail.c_str());
        }
      }
      if (!all) return kFixture;
    }
  } catch (const pint::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const pint::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kConfig;
  } catch (const pint::UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kConfig;
  } catch (const pint::StepFailure& e) {
    std::cerr << "numerical failure at " << e.what() << "\n";
    return kNumerical;
  } catch (const pint::NewtonDiverged& e) {
    std::cerr << "newton diverged: " << e.what() << "\n";
    return kNumerical;
  } catch (const pint::DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return kNumerical;
  } catch (const pint::ReferenceSolverError& e) {
    std::cerr << "reference solver: " << e.what() << "\n";
    return kNumerical;
  }
  return kOk;
}
