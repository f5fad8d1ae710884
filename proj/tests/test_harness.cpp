#include "doctest.h"
#include "pint/harness.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace pint::testing {

namespace {

using nlohmann::json;

json harmonic_config() {
  return {{"structure", "canonical:2"}, {"hamiltonian", "(q^2 + p^2)/2"}, {"scheme", "hj:1"},
          {"dt", 0.1},                  {"steps", 10},                      {"initial", {1.0, 0.0}}};
}

json lv_config() {
  return {{"structure", "log_canonical"},
          {"A", {{0, 1, 1}, {-1, 0, 1}, {-1, -1, 0}}},
          {"hamiltonian", "x1 + x2 + x3"},
          {"scheme", "hj:2"},
          {"dt", 0.05},
          {"steps", 20},
          {"initial", {0.5, 0.4, 0.3}}};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("config validation") {
  CHECK_NOTHROW(parse_config(harmonic_config()));
  auto bad = [](const char* key, json value) {
    auto j = harmonic_config();
    j[key] = std::move(value);
    return j;
  };
  CHECK_THROWS_AS(parse_config(bad("dt", 0.0)), ConfigError);
  CHECK_THROWS_AS(parse_config(bad("dt", -0.1)), ConfigError);
  CHECK_THROWS_AS(parse_config(bad("steps", 0)), ConfigError);
  CHECK_THROWS_AS(parse_config(bad("hamiltonian", "q^2 +")), ConfigError);
  CHECK_THROWS_AS(parse_config(bad("hamiltonian", "q^2 + z")), ConfigError);
  CHECK_THROWS_AS(parse_config(bad("structure", "canonical:3")), ConfigError);
  CHECK_THROWS_AS(parse_config(bad("structure", "torus")), ConfigError);
  CHECK_THROWS_AS(parse_config(bad("scheme", "euler")), ConfigError);
  CHECK_THROWS_AS(parse_config(bad("scheme", "hj:9")), ConfigError);
  CHECK_THROWS_AS(parse_config(bad("initial", {1.0})), ConfigError);
  CHECK_THROWS_AS(parse_config(bad("outputs", {"plot"})), ConfigError);
  CHECK_THROWS_AS(parse_config(bad("outputs", {"order-study"})), ConfigError);
  CHECK_THROWS_AS(parse_config(bad("colour", "red")), ConfigError);
  CHECK_THROWS_AS(parse_config(bad("scheme", "kahan_lv")), ConfigError);
  CHECK_THROWS_AS(parse_config(bad("scheme", "counterexample:2")), ConfigError);
  CHECK_THROWS_AS(parse_config(json::array()), ConfigError);

  auto order = harmonic_config();
  order["scheme"] = "hj";
  order["order"] = 3;
  CHECK(parse_config(order).scheme == "hj:3");

  auto lv = lv_config();
  lv["scheme"] = "kahan_lv";
  CHECK_NOTHROW(parse_config(lv));
  lv["hamiltonian"] = "x1 + x2 + x3^2";
  CHECK_THROWS_AS(parse_config(lv), ConfigError);
  lv.erase("A");
  CHECK_THROWS_AS(parse_config(lv), ConfigError);

  auto split = harmonic_config();
  split["scheme"] = "strang:hj:1,rk4";
  CHECK_THROWS_AS(parse_config(split), ConfigError);
  split["hamiltonian_parts"] = {"q^2/2", "p^2/2"};
  CHECK(build_problem(parse_config(split)).map.name() == "strang:hj:1,rk4");
}

TEST_CASE("harmonic hj:1 run conserves H") {
  const auto r = run(parse_config(harmonic_config()));
  REQUIRE(r.step.size() == 11);
  for (std::size_t i = 0; i < r.step.size(); ++i) {
    CHECK(r.step[i] == static_cast<int>(i));
    CHECK(r.time[i] == r.step[i] * 0.1);
  }
  CHECK(std::abs(r.energy.back() - 0.5) <= 1e-12);
  CHECK(r.newton_iters[0] == 0);
  CHECK(r.newton_iters[1] >= 1);
}

TEST_CASE("counterexample run reports the norm in log scale") {
  json j = {{"structure", "counterexample_2d"}, {"hamiltonian", "(x^2 + y^2)/2"}, {"scheme", "counterexample:2"},
            {"dt", 0.1},                        {"steps", 10000},                 {"initial", {1.0, 0.0}}};
  const auto r = run(parse_config(j));
  const auto d = drift_report(r);
  // ||x_N|| = e^{N dt^k} ||x_0||.
  CHECK(std::abs(d.final_log_norm - 100.0) < 1e-9);
  CHECK(std::isfinite(r.state.back()[0]));
  // H_n = e^{2 n dt^k} H_0.
  j["steps"] = 50;
  const auto short_run = run(parse_config(j));
  const double expected = std::expm1(2 * 50 * 0.01) * 0.5;
  CHECK(std::abs(drift_report(short_run).max_energy_drift - expected) < 1e-12 * expected);
}

TEST_CASE("step failures carry the step index") {
  json j = {{"structure", "so3_dual"}, {"hamiltonian", "x1^2/2 + x2^2/4 + x3^2/6"}, {"scheme", "hj:2"},
            {"dt", 5.0},               {"steps", 3},                                {"initial", {1.0, 0.5, 0.3}}};
  try {
    run(parse_config(j));
    FAIL("expected StepFailure");
  } catch (const StepFailure& e) {
    CHECK(e.step() == 1);
  }
}

TEST_CASE("identical configs give bit-identical files") {
  auto j = lv_config();
  j["outputs"] = {"trajectory", "drift"};
  const auto cfg = parse_config(j);
  const auto base = std::filesystem::temp_directory_path() / "pint_determinism";
  std::filesystem::remove_all(base);
  write_outputs(cfg, run(cfg), base / "a");
  write_outputs(cfg, run(cfg), base / "b");
  for (const char* f : {"trajectory.csv", "meta.json", "drift.json"}) {
    const auto a = slurp(base / "a" / f);
    CHECK(!a.empty());
    CHECK(a == slurp(base / "b" / f));
  }
  const auto meta = json::parse(slurp(base / "a" / "meta.json"));
  CHECK(meta["content_hash"]["trajectory.csv"] == content_hash(slurp(base / "a" / "trajectory.csv")));
  CHECK(meta["config"] == j);
  std::filesystem::remove_all(base);
}

TEST_CASE("content hash is the git blob hash") {
  // Values from `git hash-object`.
  CHECK(content_hash("") == "e69de29bb2d1d6434b8b29ae775ad8c2e48c5391");
  CHECK(content_hash("hello\n") == "ce013625030ba8dba906f756967f9e9ca394464a");
}

TEST_CASE("CSV round trip") {
  const auto r = run(parse_config(lv_config()));
  const auto csv = to_csv(r);
  CHECK(csv.substr(0, csv.find('\n')) == "step,time,x0,x1,x2,H,C0,newton_iters");
  const auto back = parse_csv(csv);
  CHECK(back.dim == 3);
  CHECK(back.step == r.step);
  CHECK(back.time == r.time);
  CHECK(back.state == r.state);
  CHECK(back.energy == r.energy);
  CHECK(back.casimir == r.casimir);
  CHECK(back.newton_iters == r.newton_iters);
  CHECK(to_csv(back) == csv);
  CHECK_THROWS_AS(parse_csv("a,b\n1,2\n"), ConfigError);
  CHECK_THROWS_AS(parse_csv("step,time,x0,H,newton_iters\n0,0,1\n"), ConfigError);
}

TEST_CASE("drift report aggregates") {
  TrajectoryRecord r;
  r.dim = 1;
  r.step = {0, 1, 2};
  r.time = {0, 0.1, 0.2};
  r.state = {{1.0}, {2.0}, {-4.0}};
  r.energy = {1.0, 1.5, 0.25};
  r.casimir = {{3.0, 0.0}, {3.0, -1e-3}, {2.0, 1e-4}};
  r.newton_iters = {0, 2, 2};
  const auto d = drift_report(r);
  CHECK(d.steps == 2);
  CHECK(d.max_energy_drift == 0.75);
  CHECK(d.max_casimir_drift == std::vector<double>{1.0, 1e-3});
  CHECK(d.newton_histogram == std::map<int, int>{{2, 2}});
  CHECK(d.final_log_norm == doctest::Approx(std::log(4.0)));
  CHECK(to_json(d)["newton_histogram"]["2"] == 2);
}

TEST_CASE("Kahan and hj:2 drift on Lotka-Volterra") {
  auto j = lv_config();
  j["scheme"] = "kahan_lv";
  j["steps"] = 2000;
  CHECK(drift_report(run(parse_config(j))).max_energy_drift < 1e-10);
  // Cyclic A keeps the orbit bounded; its Casimir is x1 x2 x3.
  j["A"] = {{0, 1, -1}, {-1, 0, 1}, {1, -1, 0}};
  j["scheme"] = "hj:2";
  j["steps"] = 500;
  CHECK(drift_report(run(parse_config(j))).max_casimir_drift[0] < 1e-9);
}

TEST_CASE("order studies") {
  CHECK(loglog_slope({1, 2, 4}, {3, 12, 48}) == doctest::Approx(2.0).epsilon(1e-14));

  const std::vector<double> dts{0.1, 0.05, 0.025, 0.0125};
  auto harmonic = parse_config(harmonic_config());
  const auto mid = order_study(harmonic, {dts, "harmonic", 1.0});
  MESSAGE("hj:1 harmonic slope " << mid.slope);
  CHECK(mid.slope >= 1.8);
  CHECK(mid.slope <= 2.3);

  harmonic.scheme = "rk4";
  const auto rk = order_study(harmonic, {dts, "harmonic", 1.0});
  MESSAGE("rk4 harmonic slope " << rk.slope);
  CHECK(rk.slope >= 3.8);
  CHECK(rk.slope <= 4.3);

  auto lv = lv_config();
  lv["A"] = {{0, 1, -1}, {-1, 0, 1}, {1, -1, 0}};
  lv["hamiltonian"] = "x1 + x2 + x3 + x1*x2";
  const auto hj2 = order_study(parse_config(lv), {dts, "rk4_fine", 1.0});
  MESSAGE("hj:2 LV slope " << hj2.slope);
  CHECK(hj2.slope >= 1.8);

  const auto ref = order_study(parse_config(lv), {{0.1, 0.05}, "reference", 1.0});
  CHECK(ref.slope >= 1.8);

  CHECK_THROWS_AS(order_study(harmonic, {dts, "harmonic", 0.33}), ConfigError);
  CHECK_THROWS_AS(order_study(harmonic, {dts, "pendulum", 1.0}), ConfigError);
  CHECK(to_json(mid)["rows"].size() == 4);
}

TEST_CASE("regression fixtures replay green") {
  const char* dir = std::getenv("PINT_FIXTURES_DIR");
  if (!dir) {
    MESSAGE("PINT_FIXTURES_DIR not set; skipping");
    return;
  }
  const auto results = run_fixtures(dir);
  CHECK(results.size() == 5);
  for (const auto& r : results) {
    INFO(r.name << " measured " << r.measured << " tolerance " << r.tolerance << " " << r.detail);
    CHECK(r.passed);
  }
  CHECK_THROWS_AS(run_fixtures(std::filesystem::path(dir) / "missing"), ConfigError);
}

TEST_CASE("a corrupted fixture fails") {
  json f = {{"name", "m"},          {"kind", "midpoint_equivalence"}, {"dt", 0.1},
            {"states", {{1.0, 0.0}}}, {"expected", {{0.0, 0.0}}},     {"tolerance", 1e-10}};
  CHECK_FALSE(run_fixture(f).passed);
  f["kind"] = "mystery";
  CHECK_THROWS_AS(run_fixture(f), ConfigError);
}

}  // namespace pint::testing
