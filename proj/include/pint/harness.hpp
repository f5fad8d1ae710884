// Run configuration, trajectories, drift and order studies, fixture replay.
//
// Config files are JSON objects with the keys
//   structure     "canonical:<n>" | "log_canonical" | "log_canonical:<rows>" |
//                 "so3_dual" | "counterexample_2d"
//   A             row-major matrix, required by "log_canonical"
//   hamiltonian   expression text
//   variables     optional variable names (defaults depend on the structure)
//   scheme        "hj:<k>" | "rk4" | "kahan_lv" | "counterexample:<k>" |
//                 "strang:<a>,<b>"
//   order         optional k; "scheme": "hj" with "order": k means "hj:k"
//   dt, steps, initial
//   outputs       subset of ["trajectory", "drift", "order-study"]
//   seed          integer, echoed into the metadata
//   casimirs      optional expression texts (defaults: known Casimirs)
//   hamiltonian_parts  two expressions for "strang:<a>,<b>"
//   newton        {"tol", "max_iter", "substep"}
//   order_study   {"dts": [...], "reference": tag, "horizon": T}
// Unknown keys are rejected.
#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "pint/integrator.hpp"

namespace pint {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A step failed during a run; `step` is the 1-based index of the failing step.
class StepFailure : public std::runtime_error {
 public:
  StepFailure(int step, const std::string& what)
      : std::runtime_error("step " + std::to_string(step) + ": " + what), step_(step) {}
  int step() const { return step_; }

 private:
  int step_;
};

struct OrderStudySpec {
  std::vector<double> dts;
  /// An exact_flow tag, "rk4_fine" (RK4 at dt/100) or "reference" (adaptive ODE solver).
  std::string reference = "reference";
  double horizon = 1.0;
};

struct RunConfig {
  std::string structure;
  std::optional<Eigen::MatrixXd> a;
  std::string hamiltonian;
  std::vector<std::string> variables;
  std::string scheme;
  double dt = 0.0;
  int steps = 0;
  std::vector<double> initial;
  std::vector<std::string> outputs{"trajectory"};
  std::uint64_t seed = 0;
  std::optional<std::vector<std::string>> casimirs;
  std::vector<std::string> hamiltonian_parts;
  StepConfig step;
  std::optional<OrderStudySpec> order_study;
  nlohmann::json source;
};

RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::filesystem::path& path);

/// Everything a run needs, resolved from a config.
struct Problem {
  PoissonStructure pi;
  VarList variables;
  Expr hamiltonian;
  std::vector<Expr> casimirs;
  StepMap map;
};

Problem build_problem(const RunConfig& cfg);

struct TrajectoryRecord {
  int dim = 0;
  double dt = 0.0;
  std::vector<int> step;
  std::vector<double> time;
  std::vector<std::vector<double>> state;
  std::vector<double> energy;
  std::vector<std::vector<double>> casimir;  // per row
  std::vector<int> newton_iters;
  std::size_t casimir_count() const { return casimir.empty() ? 0 : casimir.front().size(); }
};

/// N steps from the initial point; row 0 is the initial state.
TrajectoryRecord run(const RunConfig& cfg);
TrajectoryRecord run(const Problem& p, double dt, int steps, const std::vector<double>& initial);

std::string to_csv(const TrajectoryRecord& r);
TrajectoryRecord parse_csv(const std::string& text);
TrajectoryRecord read_csv(const std::filesystem::path& path);

/// Git blob hash ("blob <size>\0" + content) as lowercase hex SHA-1.
std::string content_hash(const std::string& content);

struct DriftSummary {
  int steps = 0;
  double max_energy_drift = 0.0;
  std::vector<double> max_casimir_drift;
  std::map<int, int> newton_histogram;
  /// log of the final Euclidean norm, computed without overflow.
  double final_log_norm = 0.0;
};

DriftSummary drift_report(const TrajectoryRecord& r);
nlohmann::json to_json(const DriftSummary& d);

struct OrderStudyResult {
  std::vector<double> dts;
  std::vector<double> errors;
  double slope = 0.0;
};

/// Integrates to the horizon for each dt and fits log(error) = slope log(dt) + c.
OrderStudyResult order_study(const RunConfig& cfg, const OrderStudySpec& spec);
nlohmann::json to_json(const OrderStudyResult& r);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Writes the requested outputs into `dir`: trajectory.csv + meta.json,
/// drift.json, order_study.json. Returns the written paths.
std::vector<std::filesystem::path> write_outputs(const RunConfig& cfg, const TrajectoryRecord& r,
                                                 const std::filesystem::path& dir);

struct FixtureResult {
  std::string name;
  bool passed = false;
  double measured = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

FixtureResult run_fixture(const nlohmann::json& fixture);
/// Every *.json file in `dir`, in file-name order.
std::vector<FixtureResult> run_fixtures(const std::filesystem::path& dir);

}  // namespace pint
