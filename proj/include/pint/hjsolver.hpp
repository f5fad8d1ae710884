// Truncated generating function S_t = sum_{j=1..k} t^j S_j of the groupoid
// Hamilton-Jacobi equation d/dt S_t(m) = H(alpha(m, dS_t(m))), S_0 = 0.
//
// Recursion: S_1 = H and
//   S_{i+1}(m) = [t^i] H(alpha(m, sum_{j<=i} t^j dS_j(m))) / (i+1).
// The S_j are never expanded symbolically: at each point they are computed
// together as truncated Taylor polynomials in the spatial displacement.
#pragma once

#include <Eigen/Dense>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

#include "pint/birealisation.hpp"
#include "pint/expr.hpp"
#include "pint/jet.hpp"
#include "pint/magnus.hpp"

namespace pint {

struct NewtonReport {
  int iterations = 0;
  double residual = 0.0;
};

class NewtonDiverged : public std::runtime_error {
 public:
  NewtonDiverged(const std::string& what, NewtonReport report) : std::runtime_error(what), report_(report) {}
  const NewtonReport& report() const { return report_; }

 private:
  NewtonReport report_;
};

struct NewtonOptions {
  double tol = 1e-12;
  int max_iter = 50;
};

class GeneratingFunction {
 public:
  GeneratingFunction(Expr hamiltonian, BiRealisation bireal, int k);

  int order() const { return k_; }
  int dim() const { return bireal_.dim(); }
  const Expr& hamiltonian() const { return h_; }
  const BiRealisation& bireal() const { return bireal_; }

  /// S_1..S_k about m, each exact through total degree `degree`.
  std::vector<MultiJet> coefficient_jets(std::span<const double> m, int degree) const;
  /// S_j(m), 1 <= j <= k.
  double coefficient(int j, std::span<const double> m) const;

  struct Local {
    double value;
    std::vector<double> gradient;
    Eigen::MatrixXd hessian;
    double time_derivative;  // d/dt S_t(m)
  };
  /// S_t and its spatial derivatives at m.
  Local local(double t, std::span<const double> m) const;

 private:
  Expr h_;
  BiRealisation bireal_;
  int k_;
};

GeneratingFunction hj_coefficients(const Expr& h, const BiRealisation& b, int k);

double eval_S(const GeneratingFunction& gf, double t, std::span<const double> m);
std::vector<double> grad_S(const GeneratingFunction& gf, double t, std::span<const double> m);

/// d/dt S_t(m) - H(alpha(m, dS_t(m))).
double hj_residual(const GeneratingFunction& gf, double t, std::span<const double> m);

struct Bisection {
  std::vector<double> xbar;      // alpha(xbar, dS_t(xbar)) = x
  std::vector<double> covector;  // dS_t(xbar)
  NewtonReport report;
};

/// Newton solve of alpha(xbar, dS_t(xbar)) = x from xbar = x. The tolerance
/// applies to the max-norm residual scaled by max(1, |x|_inf).
Bisection solve_bisection(const GeneratingFunction& gf, double t, std::span<const double> x,
                          const NewtonOptions& opts = {});

/// h_t(x) = d/dt S_t(xbar) with xbar from solve_bisection.
double variation_function(const GeneratingFunction& gf, double t, std::span<const double> x,
                          const NewtonOptions& opts = {});
/// As above; `b` must be the bi-realisation gf was built against.
double variation_function(const GeneratingFunction& gf, const BiRealisation& b, double t, std::span<const double> x,
                          const NewtonOptions& opts = {});

/// t-expansion of h_t about x0 through t^order, each coefficient a spatial
/// jet exact through total degree `degree`.
TJet<MultiJet> variation_jet(const GeneratingFunction& gf, std::span<const double> x0, int order, int degree);

/// h_t as a time-dependent Hamiltonian, for backward analysis.
class VariationHamiltonian : public TimeDepHamiltonian {
 public:
  explicit VariationHamiltonian(GeneratingFunction gf, NewtonOptions opts = {})
      : gf_(std::move(gf)), opts_(opts) {}

  int dim() const override { return gf_.dim(); }
  TJet<MultiJet> expand(std::span<const double> x, int order, int degree) const override {
    return variation_jet(gf_, x, order, degree);
  }
  double value(double t, std::span<const double> x) const override {
    return variation_function(gf_, t, x, opts_);
  }
  std::vector<double> gradient(double t, std::span<const double> x) const override;

 private:
  GeneratingFunction gf_;
  NewtonOptions opts_;
};

}  // namespace pint
