#include "pint/integrator.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <cstdio>

#include "pint/reference.hpp"

namespace pint {

namespace {

std::vector<double> field(const PoissonStructure& pi, const Expr& h, std::span<const double> x) {
  const auto g = gradient(h, x);
  return contract(pi.tensor(x), std::span<const double>(g));
}

StepResult hj_substep(const GeneratingFunction& gf, const StepConfig& cfg, double dt, std::span<const double> x,
                      int depth) {
  StepConfig c = cfg;
  c.dt = dt;
  try {
    auto [y, rep] = hj_step(gf, c, x);
    return {std::move(y), rep.iterations};
  } catch (const NewtonDiverged&) {
    if (!cfg.allow_substep || depth >= 4) throw;
    auto half = hj_substep(gf, cfg, dt / 2, x, depth + 1);
    auto second = hj_substep(gf, cfg, dt / 2, half.x, depth + 1);
    second.newton_iterations += half.newton_iterations;
    return second;
  }
}

std::string rigid_body_text(const std::vector<double>& inertia) {
  std::string s;
  char buf[96];
  for (std::size_t i = 0; i < 3; ++i) {
    std::snprintf(buf, sizeof buf, "%sx%zu^2/(2*%.17g)", i ? " + " : "", i + 1, inertia[i]);
    s += buf;
  }
  return s;
}

}  // namespace

std::pair<std::vector<double>, NewtonReport> hj_step(const GeneratingFunction& gf, const StepConfig& cfg,
                                                     std::span<const double> x) {
  const auto bis = solve_bisection(gf, cfg.dt, x, {cfg.newton_tol, cfg.newton_max_iter});
  try {
    return {gf.bireal().beta<double>(bis.xbar, bis.covector), bis.report};
  } catch (const DomainError& e) {
    throw NewtonDiverged(std::string("target map failed: ") + e.what(), bis.report);
  }
}

std::vector<double> rk4_step(const PoissonStructure& pi, const Expr& h, double dt, std::span<const double> x) {
  const std::size_t n = x.size();
  std::vector<double> y(n);
  auto stage = [&](const std::vector<double>& k, double c) {
    for (std::size_t i = 0; i < n; ++i) y[i] = x[i] + c * dt * k[i];
    return field(pi, h, y);
  };
  const auto k1 = field(pi, h, x);
  const auto k2 = stage(k1, 0.5);
  const auto k3 = stage(k2, 0.5);
  const auto k4 = stage(k3, 1.0);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = x[i] + dt / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
  return out;
}

std::vector<double> kahan_lv_step(double dt, std::span<const double> x) {
  const auto n = static_cast<Eigen::Index>(x.size());
  Eigen::Map<const Eigen::VectorXd> xv(x.data(), n);
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) c(i, j) = j > i ? 1.0 : (j < i ? -1.0 : 0.0);
  const Eigen::VectorXd cx = c * xv;
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n) - dt * (xv.asDiagonal() * c);
  m.diagonal() -= dt * cx;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
  if (!lu.isInvertible()) throw DomainError("Kahan step: singular linear system");
  const Eigen::VectorXd y = lu.solve(xv);
  if (!y.allFinite()) throw DomainError("Kahan step: non-finite solution");
  return {y.data(), y.data() + n};
}

std::vector<double> counterexample_step(double dt, int k, std::span<const double> x) {
  if (x.size() != 2) throw UsageError("counterexample step is two-dimensional");
  const double g = std::exp(std::pow(dt, k));
  const double c = std::cos(dt), s = std::sin(dt);
  return {g * (c * x[0] - s * x[1]), g * (s * x[0] + c * x[1])};
}

double kahan_f(double t, double u) {
  if (u == 0.0) return t / 2;
  return std::tanh(u * t / 2) / u;
}

double kahan_flow_time(double dt, double u) {
  if (u == 0.0) return 2 * dt;
  if (!(std::abs(u * dt) < 1.0)) throw DomainError("Kahan step outside |H dt| < 1");
  return 2 * std::atanh(u * dt) / u;
}

PoissonStructure lv_quadratic_structure(int n) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      a(i, j) = 1.0;
      a(j, i) = -1.0;
    }
  return PoissonStructure::log_canonical(a);
}

std::vector<double> reference_flow(const PoissonStructure& pi, const Expr& h, double t, std::span<const double> x) {
  return integrate_reference(
      [&](double, const std::vector<double>& y, std::vector<double>& dy) { dy = field(pi, h, y); },
      {x.begin(), x.end()}, 0.0, t);
}

std::vector<double> exact_flow(const std::string& tag, double t, std::span<const double> x,
                               const std::vector<double>& params) {
  if (tag == "harmonic") {
    if (x.size() != 2) throw UsageError("harmonic flow is two-dimensional");
    const double c = std::cos(t), s = std::sin(t);
    return {c * x[0] + s * x[1], c * x[1] - s * x[0]};
  }
  if (tag == "counterexample_2d") {
    if (x.size() != 2) throw UsageError("counterexample flow is two-dimensional");
    const double w = (x[0] * x[0] + x[1] * x[1]) * t;
    const double c = std::cos(w), s = std::sin(w);
    return {c * x[0] - s * x[1], s * x[0] + c * x[1]};
  }
  if (tag == "so3_free_rigid_body") {
    if (x.size() != 3) throw UsageError("rigid body flow is three-dimensional");
    const std::vector<double> inertia = params.empty() ? std::vector<double>{1.0, 2.0, 3.0} : params;
    if (inertia.size() != 3) throw UsageError("rigid body needs three moments of inertia");
    const auto pi = PoissonStructure::so3_dual();
    return reference_flow(pi, parse(rigid_body_text(inertia), default_variables(pi)), t, x);
  }
  if (tag == "lv_reparam") {
    const int n = static_cast<int>(x.size());
    double u = 0.0;
    for (double c : x) u += c;
    const auto pi = lv_quadratic_structure(n);
    const auto vars = default_variables(pi);
    std::string text;
    for (int i = 0; i < n; ++i) text += (i ? " + " : "") + (*vars)[static_cast<std::size_t>(i)];
    return reference_flow(pi, parse(text, vars), kahan_flow_time(t, u), x);
  }
  throw UsageError("unknown exact flow '" + tag + "'");
}

StepMap make_hj_map(GeneratingFunction gf, const StepConfig& cfg) {
  const int k = gf.order();
  return StepMap("hj:" + std::to_string(k), k, [gf = std::move(gf), cfg](double dt, std::span<const double> x) {
    return hj_substep(gf, cfg, dt, x, 0);
  });
}

StepMap make_rk4_map(PoissonStructure pi, Expr h) {
  return StepMap("rk4", 4, [pi = std::move(pi), h = std::move(h)](double dt, std::span<const double> x) {
    return StepResult{rk4_step(pi, h, dt, x), 0};
  });
}

StepMap make_kahan_map() {
  return StepMap("kahan_lv", 2, [](double dt, std::span<const double> x) { return StepResult{kahan_lv_step(dt, x), 0}; });
}

StepMap make_counterexample_map(int k) {
  return StepMap("counterexample:" + std::to_string(k), k, [k](double dt, std::span<const double> x) {
    return StepResult{counterexample_step(dt, k, x), 0};
  });
}

StepMap compose_steps(const std::vector<std::pair<StepMap, double>>& steps) {
  if (steps.empty()) throw UsageError("compose_steps needs at least one step");
  std::string name = "compose(";
  int order = steps.front().first.order();
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (!std::isfinite(steps[i].second)) throw UsageError("composition coefficient must be finite");
    name += (i ? "," : "") + steps[i].first.name();
    order = std::min(order, steps[i].first.order());
  }
  name += ")";
  return StepMap(name, order, [steps](double dt, std::span<const double> x) {
    StepResult r{{x.begin(), x.end()}, 0};
    for (const auto& [map, c] : steps) {
      auto next = map(c * dt, r.x);
      r.x = std::move(next.x);
      r.newton_iterations += next.newton_iterations;
    }
    return r;
  });
}

StepMap strang(const StepMap& a, const StepMap& b) {
  auto m = compose_steps({{a, 0.5}, {b, 1.0}, {a, 0.5}});
  return StepMap("strang:" + a.name() + "," + b.name(), std::max(2, std::min(a.order(), b.order())),
                 [m](double dt, std::span<const double> x) { return m(dt, x); });
}

}  // namespace pint
