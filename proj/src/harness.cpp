#include "pint/harness.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <set>
#include <sstream>

namespace pint {

namespace {

using nlohmann::json;

const std::set<std::string> kConfigKeys{"structure", "A",        "hamiltonian", "variables", "scheme",
                                        "order",     "dt",       "steps",       "initial",   "outputs",
                                        "seed",      "casimirs", "hamiltonian_parts", "newton", "order_study"};

template <class T>
T get_as(const json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config key '") + key + "': " + e.what());
  }
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Eigen::MatrixXd matrix_from_json(const json& rows) {
  if (!rows.is_array() || rows.empty()) throw ConfigError("matrix must be a non-empty list of rows");
  const auto n = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXd a(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& row = rows[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) throw ConfigError("matrix must be square");
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!row[static_cast<std::size_t>(j)].is_number()) throw ConfigError("matrix entries must be numbers");
      a(i, j) = row[static_cast<std::size_t>(j)].get<double>();
    }
  }
  return a;
}

Expr parse_or_config_error(const std::string& text, const VarList& vars, const std::string& what) {
  try {
    return parse(text, vars);
  } catch (const ParseError& e) {
    throw ConfigError(what + ": " + e.what());
  }
}

int parse_order(const std::string& s, const std::string& scheme) {
  try {
    std::size_t used = 0;
    const int k = std::stoi(s, &used);
    if (used != s.size() || k < 1 || k > kMaxJetOrder) throw std::invalid_argument("range");
    return k;
  } catch (const std::exception&) {
    throw ConfigError("scheme '" + scheme + "': order must be an integer in [1, 6]");
  }
}

StepMap single_scheme(const std::string& scheme, const PoissonStructure& pi, const Expr& h, const StepConfig& step) {
  if (scheme.rfind("hj:", 0) == 0) {
    const int k = parse_order(scheme.substr(3), scheme);
    try {
      return make_hj_map(GeneratingFunction(h, BiRealisation::for_structure(pi), k), step);
    } catch (const UsageError& e) {
      throw ConfigError("scheme '" + scheme + "': " + e.what());
    }
  }
  if (scheme == "rk4") return make_rk4_map(pi, h);
  throw ConfigError("unknown scheme '" + scheme + "'");
}

bool is_quadratic_lv(const PoissonStructure& pi) {
  const auto* lc = std::get_if<PoissonStructure::LogCanonical>(&pi.kind());
  if (!lc) return false;
  const auto n = lc->a.rows();
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (lc->a(i, j) != (j > i ? 1.0 : (j < i ? -1.0 : 0.0))) return false;
  return true;
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double log_norm(std::span<const double> x) {
  double scale = 0.0;
  for (double c : x) scale = std::max(scale, std::abs(c));
  if (scale == 0.0) return -std::numeric_limits<double>::infinity();
  if (!std::isfinite(scale)) return scale;
  double s = 0.0;
  for (double c : x) s += (c / scale) * (c / scale);
  return std::log(scale) + 0.5 * std::log(s);
}

std::vector<double> row(const json& j) {
  if (!j.is_array()) throw ConfigError("expected a list of numbers");
  return j.get<std::vector<double>>();
}

}  // namespace

// ---------------------------------------------------------------------------
// Configuration

RunConfig parse_config(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!kConfigKeys.count(key)) throw ConfigError("unknown config key '" + key + "'");
  }
  RunConfig cfg;
  cfg.source = j;
  cfg.structure = get_as<std::string>(j, "structure");
  if (j.contains("A")) cfg.a = matrix_from_json(j["A"]);
  cfg.hamiltonian = get_as<std::string>(j, "hamiltonian");
  if (j.contains("variables")) cfg.variables = get_as<std::vector<std::string>>(j, "variables");
  cfg.scheme = get_as<std::string>(j, "scheme");
  if (j.contains("order")) {
    const int k = get_as<int>(j, "order");
    if (cfg.scheme == "hj") {
      cfg.scheme = "hj:" + std::to_string(k);
    } else if (cfg.scheme.rfind("hj:", 0) != 0 || cfg.scheme != "hj:" + std::to_string(k)) {
      throw ConfigError("'order' conflicts with scheme '" + cfg.scheme + "'");
    }
  }
  cfg.dt = get_as<double>(j, "dt");
  if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) throw ConfigError("dt must be a finite number > 0");
  cfg.steps = get_as<int>(j, "steps");
  if (cfg.steps < 1) throw ConfigError("steps must be >= 1");
  cfg.initial = get_as<std::vector<double>>(j, "initial");
  for (double c : cfg.initial)
    if (!std::isfinite(c)) throw ConfigError("initial point must be finite");
  if (j.contains("outputs")) cfg.outputs = get_as<std::vector<std::string>>(j, "outputs");
  for (const auto& o : cfg.outputs) {
    if (o != "trajectory" && o != "drift" && o != "order-study") throw ConfigError("unknown output '" + o + "'");
  }
  if (j.contains("seed")) cfg.seed = get_as<std::uint64_t>(j, "seed");
  if (j.contains("casimirs")) cfg.casimirs = get_as<std::vector<std::string>>(j, "casimirs");
  if (j.contains("hamiltonian_parts")) cfg.hamiltonian_parts = get_as<std::vector<std::string>>(j, "hamiltonian_parts");
  if (j.contains("newton")) {
    const auto& n = j["newton"];
    if (!n.is_object()) throw ConfigError("'newton' must be an object");
    for (const auto& [key, value] : n.items()) {
      if (key != "tol" && key != "max_iter" && key != "substep") throw ConfigError("unknown newton key '" + key + "'");
    }
    if (n.contains("tol")) cfg.step.newton_tol = get_as<double>(n, "tol");
    if (n.contains("max_iter")) cfg.step.newton_max_iter = get_as<int>(n, "max_iter");
    if (n.contains("substep")) cfg.step.allow_substep = get_as<bool>(n, "substep");
    if (!(cfg.step.newton_tol > 0.0)) throw ConfigError("newton.tol must be > 0");
    if (cfg.step.newton_max_iter < 1) throw ConfigError("newton.max_iter must be >= 1");
  }
  cfg.step.dt = cfg.dt;
  if (j.contains("order_study")) {
    const auto& o = j["order_study"];
    if (!o.is_object()) throw ConfigError("'order_study' must be an object");
    for (const auto& [key, value] : o.items()) {
      if (key != "dts" && key != "reference" && key != "horizon") {
        throw ConfigError("unknown order_study key '" + key + "'");
      }
    }
    OrderStudySpec spec;
    spec.dts = get_as<std::vector<double>>(o, "dts");
    if (spec.dts.size() < 2) throw ConfigError("order_study.dts needs at least two step sizes");
    for (double d : spec.dts)
      if (!(d > 0.0) || !std::isfinite(d)) throw ConfigError("order_study.dts must be finite and > 0");
    if (o.contains("reference")) spec.reference = get_as<std::string>(o, "reference");
    if (o.contains("horizon")) spec.horizon = get_as<double>(o, "horizon");
    if (!(spec.horizon > 0.0)) throw ConfigError("order_study.horizon must be > 0");
    cfg.order_study = spec;
  }
  if (std::count(cfg.outputs.begin(), cfg.outputs.end(), "order-study") && !cfg.order_study) {
    throw ConfigError("output 'order-study' needs an 'order_study' section");
  }
  // Resolve everything else now so that errors surface before any stepping.
  build_problem(cfg);
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config " + path.string() + " is not valid JSON: " + e.what());
  }
  return parse_config(j);
}

Problem build_problem(const RunConfig& cfg) {
  std::optional<PoissonStructure> pi;
  try {
    if (cfg.structure == "log_canonical") {
      if (!cfg.a) throw ConfigError("structure 'log_canonical' needs the matrix 'A'");
      pi = PoissonStructure::log_canonical(*cfg.a);
    } else {
      if (cfg.a) throw ConfigError("'A' is only used with structure 'log_canonical'");
      pi = PoissonStructure::from_id(cfg.structure);
    }
  } catch (const UsageError& e) {
    throw ConfigError(std::string("structure: ") + e.what());
  }
  VarList vars;
  try {
    vars = cfg.variables.empty() ? default_variables(*pi) : make_variables(cfg.variables);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("variables: ") + e.what());
  }
  if (static_cast<int>(vars->size()) != pi->dim()) throw ConfigError("variable count does not match the structure");
  if (static_cast<int>(cfg.initial.size()) != pi->dim()) throw ConfigError("initial point has the wrong dimension");

  const Expr h = parse_or_config_error(cfg.hamiltonian, vars, "hamiltonian");
  std::vector<Expr> casimirs;
  if (cfg.casimirs) {
    for (const auto& c : *cfg.casimirs) casimirs.push_back(parse_or_config_error(c, vars, "casimir"));
  } else {
    casimirs = pi->default_casimirs(vars);
  }

  const std::string& s = cfg.scheme;
  std::optional<StepMap> map;
  if (s == "kahan_lv") {
    if (!is_quadratic_lv(*pi)) throw ConfigError("kahan_lv needs the bracket {x_i, x_j} = x_i x_j (i < j)");
    // The Kahan map integrates H = sum x_i; check the configured Hamiltonian.
    for (double shift : {0.0, 0.37, -1.1}) {
      std::vector<double> p(cfg.initial);
      double sum = 0.0;
      for (std::size_t i = 0; i < p.size(); ++i) {
        p[i] += shift * static_cast<double>(i + 1);
        sum += p[i];
      }
      if (std::abs(eval(h, p) - sum) > 1e-12 * std::max(1.0, std::abs(sum))) {
        throw ConfigError("kahan_lv integrates H = sum x_i only");
      }
    }
    map = make_kahan_map();
  } else if (s.rfind("counterexample:", 0) == 0) {
    if (!std::holds_alternative<PoissonStructure::Counterexample2d>(pi->kind())) {
      throw ConfigError("counterexample scheme needs structure 'counterexample_2d'");
    }
    map = make_counterexample_map(parse_order(s.substr(15), s));
  } else if (s.rfind("strang:", 0) == 0) {
    const auto comma = s.find(',', 7);
    if (comma == std::string::npos) throw ConfigError("strang scheme must read 'strang:<a>,<b>'");
    if (cfg.hamiltonian_parts.size() != 2) throw ConfigError("strang scheme needs two 'hamiltonian_parts'");
    const Expr h1 = parse_or_config_error(cfg.hamiltonian_parts[0], vars, "hamiltonian_parts[0]");
    const Expr h2 = parse_or_config_error(cfg.hamiltonian_parts[1], vars, "hamiltonian_parts[1]");
    map = strang(single_scheme(s.substr(7, comma - 7), *pi, h1, cfg.step),
                 single_scheme(s.substr(comma + 1), *pi, h2, cfg.step));
  } else {
    map = single_scheme(s, *pi, h, cfg.step);
  }
  return {std::move(*pi), vars, h, std::move(casimirs), std::move(*map)};
}

// ---------------------------------------------------------------------------
// Runs

TrajectoryRecord run(const RunConfig& cfg) { return run(build_problem(cfg), cfg.dt, cfg.steps, cfg.initial); }

TrajectoryRecord run(const Problem& p, double dt, int steps, const std::vector<double>& initial) {
  TrajectoryRecord r;
  r.dim = static_cast<int>(initial.size());
  r.dt = dt;
  auto record = [&](int index, const std::vector<double>& x, int iters) {
    r.step.push_back(index);
    r.time.push_back(index * dt);
    r.state.push_back(x);
    try {
      r.energy.push_back(eval(p.hamiltonian, x));
      std::vector<double> c;
      for (const auto& e : p.casimirs) c.push_back(eval(e, x));
      r.casimir.push_back(std::move(c));
    } catch (const DomainError& e) {
      throw StepFailure(index, std::string("diagnostic evaluation failed: ") + e.what());
    }
    r.newton_iters.push_back(iters);
  };
  record(0, initial, 0);
  std::vector<double> x = initial;
  for (int i = 1; i <= steps; ++i) {
    StepResult s;
    try {
      s = p.map(dt, x);
    } catch (const NewtonDiverged& e) {
      throw StepFailure(i, e.what());
    } catch (const DomainError& e) {
      throw StepFailure(i, e.what());
    }
    x = std::move(s.x);
    record(i, x, s.newton_iterations);
  }
  return r;
}

std::string to_csv(const TrajectoryRecord& r) {
  std::string out = "step,time";
  for (int i = 0; i < r.dim; ++i) out += ",x" + std::to_string(i);
  out += ",H";
  for (std::size_t c = 0; c < r.casimir_count(); ++c) out += ",C" + std::to_string(c);
  out += ",newton_iters\n";
  for (std::size_t k = 0; k < r.step.size(); ++k) {
    out += std::to_string(r.step[k]) + "," + fmt(r.time[k]);
    for (double v : r.state[k]) out += "," + fmt(v);
    out += "," + fmt(r.energy[k]);
    for (double v : r.casimir[k]) out += "," + fmt(v);
    out += "," + std::to_string(r.newton_iters[k]) + "\n";
  }
  return out;
}

TrajectoryRecord parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("empty trajectory file");
  std::vector<std::string> header;
  {
    std::istringstream hs(line);
    std::string cell;
    while (std::getline(hs, cell, ',')) header.push_back(cell);
  }
  TrajectoryRecord r;
  std::size_t ncas = 0;
  for (const auto& h : header) {
    if (h.size() > 1 && h[0] == 'x') ++r.dim;
    if (h.size() > 1 && h[0] == 'C') ++ncas;
  }
  const std::size_t expected = 2 + static_cast<std::size_t>(r.dim) + 1 + ncas + 1;
  if (header.size() != expected || header[0] != "step" || header[1] != "time" ||
      header[2 + static_cast<std::size_t>(r.dim)] != "H" || header.back() != "newton_iters") {
    throw ConfigError("trajectory header does not match step,time,x0..,H,C0..,newton_iters");
  }
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (cells.size() != expected) throw ConfigError("trajectory line " + std::to_string(lineno) + " has the wrong width");
    try {
      std::size_t c = 0;
      r.step.push_back(std::stoi(cells[c++]));
      r.time.push_back(std::stod(cells[c++]));
      std::vector<double> x;
      for (int i = 0; i < r.dim; ++i) x.push_back(std::stod(cells[c++]));
      r.state.push_back(std::move(x));
      r.energy.push_back(std::stod(cells[c++]));
      std::vector<double> cv;
      for (std::size_t i = 0; i < ncas; ++i) cv.push_back(std::stod(cells[c++]));
      r.casimir.push_back(std::move(cv));
      r.newton_iters.push_back(std::stoi(cells[c++]));
    } catch (const std::logic_error&) {
      throw ConfigError("trajectory line " + std::to_string(lineno) + " is not numeric");
    }
  }
  if (r.step.size() >= 2) r.dt = r.time[1] - r.time[0];
  return r;
}

TrajectoryRecord read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open trajectory " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_csv(ss.str());
}

std::string content_hash(const std::string& content) {
  const std::string blob = "blob " + std::to_string(content.size()) + std::string(1, '\0') + content;
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(blob.data(), blob.size(), md, &len, EVP_sha1(), nullptr) != 1) {
    throw std::runtime_error("SHA-1 digest failed");
  }
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", md[i]);
    hex += buf;
  }
  return hex;
}

DriftSummary drift_report(const TrajectoryRecord& r) {
  DriftSummary d;
  if (r.step.empty()) return d;
  d.steps = static_cast<int>(r.step.size()) - 1;
  d.max_casimir_drift.assign(r.casimir_count(), 0.0);
  for (std::size_t k = 1; k < r.step.size(); ++k) {
    d.max_energy_drift = std::max(d.max_energy_drift, std::abs(r.energy[k] - r.energy[0]));
    for (std::size_t c = 0; c < r.casimir_count(); ++c) {
      d.max_casimir_drift[c] = std::max(d.max_casimir_drift[c], std::abs(r.casimir[k][c] - r.casimir[0][c]));
    }
    ++d.newton_histogram[r.newton_iters[k]];
  }
  d.final_log_norm = log_norm(r.state.back());
  return d;
}

json to_json(const DriftSummary& d) {
  json hist = json::object();
  for (const auto& [iters, count] : d.newton_histogram) hist[std::to_string(iters)] = count;
  return {{"steps", d.steps},
          {"max_abs_dH", d.max_energy_drift},
          {"max_abs_dC", d.max_casimir_drift},
          {"newton_histogram", hist},
          {"final_log_norm", d.final_log_norm}};
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw UsageError("slope fit needs two or more points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

OrderStudyResult order_study(const RunConfig& cfg, const OrderStudySpec& spec) {
  const Problem p = build_problem(cfg);
  std::vector<double> exact;
  const bool fine = spec.reference == "rk4_fine";
  if (spec.reference == "reference") {
    exact = reference_flow(p.pi, p.hamiltonian, spec.horizon, cfg.initial);
  } else if (!fine) {
    try {
      exact = exact_flow(spec.reference, spec.horizon, cfg.initial);
    } catch (const UsageError& e) {
      throw ConfigError(std::string("order_study.reference: ") + e.what());
    }
  }
  std::vector<int> steps;
  for (double dt : spec.dts) {
    const double n = std::round(spec.horizon / dt);
    if (n < 1 || std::abs(n * dt - spec.horizon) > 1e-9 * spec.horizon) {
      throw ConfigError("order_study: horizon must be a multiple of every dt");
    }
    steps.push_back(static_cast<int>(n));
  }
  std::vector<std::future<double>> jobs;
  for (std::size_t i = 0; i < spec.dts.size(); ++i) {
    jobs.push_back(std::async(std::launch::async, [&, i] {
      const double dt = spec.dts[i];
      const auto rec = run(p, dt, steps[i], cfg.initial);
      std::vector<double> target = exact;
      if (fine) {
        target = cfg.initial;
        const double h = dt / 100;
        for (int s = 0; s < 100 * steps[i]; ++s) target = rk4_step(p.pi, p.hamiltonian, h, target);
      }
      return max_abs_diff(rec.state.back(), target);
    }));
  }
  OrderStudyResult out;
  out.dts = spec.dts;
  for (auto& j : jobs) out.errors.push_back(j.get());
  out.slope = loglog_slope(out.dts, out.errors);
  return out;
}

json to_json(const OrderStudyResult& r) {
  json rows = json::array();
  for (std::size_t i = 0; i < r.dts.size(); ++i) rows.push_back({{"dt", r.dts[i]}, {"error", r.errors[i]}});
  return {{"rows", rows}, {"slope", r.slope}};
}

std::vector<std::filesystem::path> write_outputs(const RunConfig& cfg, const TrajectoryRecord& r,
                                                 const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;
  auto write = [&](const std::string& name, const std::string& content) {
    const auto path = dir / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
    written.push_back(path);
  };
  auto wants = [&](const char* o) { return std::count(cfg.outputs.begin(), cfg.outputs.end(), o) > 0; };
  if (wants("trajectory")) {
    const std::string csv = to_csv(r);
    write("trajectory.csv", csv);
    json meta = {{"config", cfg.source},
                 {"columns", csv.substr(0, csv.find('\n'))},
                 {"content_hash", {{"trajectory.csv", content_hash(csv)}}}};
    write("meta.json", meta.dump(2) + "\n");
  }
  if (wants("drift")) write("drift.json", to_json(drift_report(r)).dump(2) + "\n");
  if (wants("order-study")) write("order_study.json", to_json(order_study(cfg, *cfg.order_study)).dump(2) + "\n");
  return written;
}

// ---------------------------------------------------------------------------
// Fixtures

FixtureResult run_fixture(const json& f) {
  FixtureResult res;
  res.name = get_as<std::string>(f, "name");
  res.tolerance = get_as<double>(f, "tolerance");
  const auto kind = get_as<std::string>(f, "kind");
  double measured = 0.0;

  if (kind == "midpoint_equivalence") {
    const double dt = get_as<double>(f, "dt");
    const auto states = get_as<std::vector<std::vector<double>>>(f, "states");
    const auto expected = get_as<std::vector<std::vector<double>>>(f, "expected");
    if (states.size() != expected.size()) throw ConfigError(res.name + ": states/expected length mismatch");
    GeneratingFunction gf(parse("(q^2 + p^2)/2", {"q", "p"}), BiRealisation::canonical_symplectic(2), 1);
    for (std::size_t i = 0; i < states.size(); ++i) {
      const auto y = hj_step(gf, {dt}, states[i]).first;
      measured = std::max(measured, max_abs_diff(y, expected[i]));
    }
  } else if (kind == "s2_log_canonical") {
    const auto a = matrix_from_json(f.at("A"));
    const auto b = BiRealisation::log_canonical(a);
    const auto vars = default_variables(b.structure());
    const Expr h = parse_or_config_error(get_as<std::string>(f, "hamiltonian"), vars, res.name);
    const auto points = get_as<std::vector<std::vector<double>>>(f, "points");
    const auto expected = get_as<std::vector<double>>(f, "expected");
    if (points.size() != expected.size()) throw ConfigError(res.name + ": points/expected length mismatch");
    GeneratingFunction gf(h, b, 2);
    for (std::size_t i = 0; i < points.size(); ++i) {
      const auto& m = points[i];
      const auto g = gradient(h, m);
      double closed = 0.0;
      for (Eigen::Index r = 0; r < a.rows(); ++r)
        for (Eigen::Index c = 0; c < a.cols(); ++c) {
          const auto ri = static_cast<std::size_t>(r), ci = static_cast<std::size_t>(c);
          closed += a(r, c) * m[ri] * m[ci] * g[ri] * g[ci];
        }
      closed *= -0.5;
      const double s2 = gf.coefficient(2, m);
      measured = std::max({measured, std::abs(s2 - expected[i]), std::abs(s2 - closed)});
    }
  } else if (kind == "kahan_h_exact") {
    const double dt = get_as<double>(f, "dt");
    const int steps = get_as<int>(f, "steps");
    auto x = row(f.at("initial"));
    double h0 = 0.0;
    for (double c : x) h0 += c;
    for (int i = 0; i < steps; ++i) {
      x = kahan_lv_step(dt, x);
      double h = 0.0;
      for (double c : x) h += c;
      measured = std::max(measured, std::abs(h - h0));
    }
  } else if (kind == "counterexample_divergence") {
    const double dt = get_as<double>(f, "dt");
    const int k = get_as<int>(f, "k");
    const int steps = get_as<int>(f, "steps");
    const auto x0 = row(f.at("initial"));
    const double rate = std::pow(dt, k);
    const double l0 = log_norm(x0), n0 = std::exp(l0);
    const int bound = static_cast<int>(std::ceil(std::log(11.0) / rate));
    int first = -1;
    auto x = x0;
    for (int n = 1; n <= std::max(steps, bound); ++n) {
      x = counterexample_step(dt, k, x);
      if (n <= steps) measured = std::max(measured, std::abs(log_norm(x) - l0 - n * rate) / n);
      const auto e = exact_flow("counterexample_2d", n * dt, x0);
      if (first < 0 && std::hypot(x[0] - e[0], x[1] - e[1]) > 10 * n0) first = n;
    }
    if (first < 0 || first > bound) {
      res.detail = "distance to the exact flow stayed below 10|x0| for " + std::to_string(bound) + " steps";
      res.measured = measured;
      return res;
    }
    res.detail = "diverged past 10|x0| at step " + std::to_string(first) + " (bound " + std::to_string(bound) + ")";
  } else if (kind == "magnus_euler_symplectic") {
    auto h = ExprHamiltonian::parse(get_as<std::string>(f, "variation"), {"q", "p"});
    MagnusSeries series(h, PoissonStructure::canonical(2), 2);
    const auto points = get_as<std::vector<std::vector<double>>>(f, "points");
    const auto expected = get_as<std::vector<double>>(f, "expected");
    if (points.size() != expected.size()) throw ConfigError(res.name + ": points/expected length mismatch");
    for (std::size_t i = 0; i < points.size(); ++i) {
      measured = std::max(measured, std::abs(series.values(points[i])[1] - expected[i]));
    }
  } else {
    throw ConfigError(res.name + ": unknown fixture kind '" + kind + "'");
  }
  res.measured = measured;
  res.passed = measured <= res.tolerance;
  return res;
}

std::vector<FixtureResult> run_fixtures(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw ConfigError("fixture directory " + dir.string() + " not found");
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    if (e.path().extension() == ".json") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<FixtureResult> out;
  for (const auto& path : files) {
    std::ifstream in(path);
    json j;
    try {
      j = json::parse(in);
    } catch (const json::parse_error& e) {
      throw ConfigError(path.string() + ": " + e.what());
    }
    out.push_back(run_fixture(j));
  }
  return out;
}

}  // namespace pint
