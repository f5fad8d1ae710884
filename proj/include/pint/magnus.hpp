// Magnus series of a time-dependent Hamiltonian.
//
// For h_t the time-eps flow of x' = pi grad h_t equals the time-1 flow of
// Omega(eps) = sum_i eps^i Omega_i, where
//   Omega' = sum_i B_i/i! ad_Omega^i h,   ad_Omega = {Omega, .}.
// Coefficient bookkeeping: with h_t = sum_j t^j h_j,
//   (m+1) Omega_{m+1} = [eps^m] sum_{i<=m} B_i/i! ad_Omega^i h_eps.
// Hence Omega_1 = h_0, Omega_2 = h_1/2, Omega_3 = h_2/3 - {h_0, h_1}/12.
#pragma once

#include <boost/rational.hpp>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "pint/expr.hpp"
#include "pint/jet.hpp"
#include "pint/poisson.hpp"

namespace pint {

/// Exact Bernoulli number B_i (B_1 = -1/2), 0 <= i <= 16.
boost::rational<long long> bernoulli(int i);

class TimeDepHamiltonian {
 public:
  virtual ~TimeDepHamiltonian() = default;
  virtual int dim() const = 0;
  /// t-expansion at t = 0 through t^order; coefficient j is (1/j!) d^j h/dt^j,
  /// a spatial Taylor jet about x exact through total degree `degree`.
  virtual TJet<MultiJet> expand(std::span<const double> x, int order, int degree) const = 0;
  virtual double value(double t, std::span<const double> x) const = 0;
  virtual std::vector<double> gradient(double t, std::span<const double> x) const = 0;
};

/// h_t given as an expression over the space variables plus a time variable.
class ExprHamiltonian : public TimeDepHamiltonian {
 public:
  /// `time_index` is the position of t among the expression's variables, or
  /// -1 for an autonomous Hamiltonian.
  ExprHamiltonian(Expr h, int time_index);

  /// Parses `text` over `space` variables followed by `time_name`.
  static std::shared_ptr<ExprHamiltonian> parse(std::string_view text, const std::vector<std::string>& space,
                                                const std::string& time_name = "t");
  static std::shared_ptr<ExprHamiltonian> autonomous(const Expr& h);

  int dim() const override { return dim_; }
  TJet<MultiJet> expand(std::span<const double> x, int order, int degree) const override;
  double value(double t, std::span<const double> x) const override;
  std::vector<double> gradient(double t, std::span<const double> x) const override;

 private:
  std::vector<double> with_time(double t, std::span<const double> x) const;

  Expr h_;
  int time_index_;
  int dim_;
};

/// Spatial Taylor jets of {a, b} given the Poisson tensor as jets.
MultiJet jet_bracket(const MultiJet& a, const MultiJet& b, const std::vector<MultiJet>& pi);

class MagnusSeries {
 public:
  MagnusSeries(std::shared_ptr<const TimeDepHamiltonian> h, PoissonStructure pi, int k);

  int order() const { return k_; }
  const PoissonStructure& structure() const { return pi_; }

  /// Omega_1..Omega_k about x, exact through total degree `degree`.
  std::vector<MultiJet> coefficients(std::span<const double> x, int degree) const;
  /// Omega_1(x)..Omega_k(x).
  std::vector<double> values(std::span<const double> x) const;
  /// Truncated modified Hamiltonian sum_i eps^i Omega_i and its gradient.
  double modified_hamiltonian(double eps, std::span<const double> x) const;
  std::vector<double> modified_gradient(double eps, std::span<const double> x) const;

 private:
  std::shared_ptr<const TimeDepHamiltonian> h_;
  PoissonStructure pi_;
  int k_;
};

MagnusSeries magnus_truncate(std::shared_ptr<const TimeDepHamiltonian> h, const PoissonStructure& pi, int k);

/// (time-eps flow of h_t from x, time-1 flow of the truncated series at eps),
/// both integrated with the reference solver.
std::pair<std::vector<double>, std::vector<double>> magnus_flow_check(std::shared_ptr<const TimeDepHamiltonian> h,
                                                                      const PoissonStructure& pi, int k,
                                                                      std::span<const double> x, double eps);

}  // namespace pint
