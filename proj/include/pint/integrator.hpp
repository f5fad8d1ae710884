// One-step maps: the bisection scheme x -> beta(alpha|_L^{-1}(x)) built from a
// truncated generating function, plus reference schemes and composition.
#pragma once

#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pint/expr.hpp"
#include "pint/hjsolver.hpp"
#include "pint/poisson.hpp"

namespace pint {

struct StepConfig {
  double dt = 0.0;
  double newton_tol = 1e-12;
  int newton_max_iter = 50;
  /// On NewtonDiverged retry as two half steps, at most 4 levels deep.
  bool allow_substep = false;
};

struct StepResult {
  std::vector<double> x;
  int newton_iterations = 0;
};

class StepMap {
 public:
  using Fn = std::function<StepResult(double dt, std::span<const double> x)>;

  StepMap(std::string name, int order, Fn fn) : name_(std::move(name)), order_(order), fn_(std::move(fn)) {}

  const std::string& name() const { return name_; }
  int order() const { return order_; }
  StepResult operator()(double dt, std::span<const double> x) const { return fn_(dt, x); }

 private:
  std::string name_;
  int order_;
  Fn fn_;
};

std::pair<std::vector<double>, NewtonReport> hj_step(const GeneratingFunction& gf, const StepConfig& cfg,
                                                     std::span<const double> x);

std::vector<double> rk4_step(const PoissonStructure& pi, const Expr& h, double dt, std::span<const double> x);

/// Kahan map for {x_i, x_j} = x_i x_j (i < j), H = sum x_i: solves
/// (I - dt diag(x) C - dt diag(C x)) x' = x with C_ij = sign(j - i).
std::vector<double> kahan_lv_step(double dt, std::span<const double> x);

/// e^{dt^k} R(dt) x.
std::vector<double> counterexample_step(double dt, int k, std::span<const double> x);

/// (e^{ut} - 1) / (u (e^{ut} + 1)), equal to t/2 at u = 0.
double kahan_f(double t, double u);
/// Flow time of the Kahan step: kahan_lv_step(dt, x) = Phi_H^tau(x) with
/// tau = ln((1 + u dt)/(1 - u dt)) / u, u = H(x); 2 dt at u = 0.
double kahan_flow_time(double dt, double u);

/// The quadratic bracket {x_i, x_j} = x_i x_j for i < j.
PoissonStructure lv_quadratic_structure(int n);

/// Time-t flow of x' = pi grad H with the reference solver.
std::vector<double> reference_flow(const PoissonStructure& pi, const Expr& h, double t, std::span<const double> x);

/// Tags: "harmonic" (canonical:2, (q^2+p^2)/2), "counterexample_2d"
/// ((x^2+y^2)/2), "so3_free_rigid_body" (params: moments of inertia,
/// default 1,2,3), "lv_reparam" (Kahan step of size t as a reparametrised
/// flow of H = sum x_i).
std::vector<double> exact_flow(const std::string& tag, double t, std::span<const double> x,
                               const std::vector<double>& params = {});

StepMap make_hj_map(GeneratingFunction gf, const StepConfig& cfg);
StepMap make_rk4_map(PoissonStructure pi, Expr h);
StepMap make_kahan_map();
StepMap make_counterexample_map(int k);

/// Applies each map in order at c * dt.
StepMap compose_steps(const std::vector<std::pair<StepMap, double>>& steps);
/// a(dt/2) b(dt) a(dt/2).
StepMap strang(const StepMap& a, const StepMap& b);

}  // namespace pint
