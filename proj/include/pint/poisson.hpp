// Poisson structures on R^n.
//
// Convention: {F,G}(x) = grad F(x)^T pi(x) grad G(x), and the Hamiltonian
// vector field is x' = pi(x) grad H(x) = {x, H}. On R^{2m} with coordinates
// (q_1..q_m, p_1..p_m) the canonical structure has {q_i, p_i} = 1.
#pragma once

#include <Eigen/Dense>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "pint/expr.hpp"
#include "pint/jet.hpp"

namespace pint {

class PoissonStructure {
 public:
  struct Canonical {
    int n;
  };
  /// {x_i, x_j} = a_ij x_i x_j
  struct LogCanonical {
    Eigen::MatrixXd a;
  };
  /// Lie-Poisson structure on so(3)*: {x_1, x_2} = x_3 and cyclic.
  struct So3Dual {};
  /// {x, y} = -(x^2 + y^2); orbits of (x^2+y^2)/2 rotate counter-clockwise.
  struct Counterexample2d {};
  /// Arbitrary entries pi_ij (i < j) given as expressions; pi_ji = -pi_ij.
  struct Custom {
    int n;
    std::vector<Expr> upper;  // row-major strict upper triangle
  };

  static PoissonStructure canonical(int n);
  static PoissonStructure log_canonical(const Eigen::MatrixXd& a);
  static PoissonStructure so3_dual();
  static PoissonStructure counterexample_2d();
  /// `entries` is a full n x n matrix of expression text over `variables`;
  /// only the strict upper triangle is read.
  static PoissonStructure custom(const std::vector<std::vector<std::string>>& entries, const VarList& variables);

  /// Parses "canonical:<n>", "log_canonical:<A as JSON rows>", "so3_dual",
  /// "counterexample_2d". Raises UsageError on unknown or malformed ids.
  static PoissonStructure from_id(const std::string& id);

  int dim() const { return dim_; }
  std::string id() const;
  const auto& kind() const { return kind_; }

  /// pi(x) as a row-major n x n array over the ring R.
  template <class R>
  std::vector<R> tensor(std::span<const R> x) const;

  Eigen::MatrixXd matrix(std::span<const double> x) const;

  /// Casimirs known in closed form: |x|^2 for so(3)*, prod x_i^{v_i} for
  /// integer kernel vectors v of a log-canonical matrix.
  std::vector<Expr> default_casimirs(const VarList& variables) const;

 private:
  using Kind = std::variant<Canonical, LogCanonical, So3Dual, Counterexample2d, Custom>;
  PoissonStructure(int dim, Kind kind) : dim_(dim), kind_(std::move(kind)) {}

  int dim_;
  Kind kind_;
};

template <class R>
std::vector<R> PoissonStructure::tensor(std::span<const R> x) const {
  if (static_cast<int>(x.size()) != dim_) throw UsageError("Poisson tensor: dimension mismatch");
  const std::size_t n = static_cast<std::size_t>(dim_);
  std::vector<R> pi(n * n, R(0.0));
  auto set = [&](std::size_t i, std::size_t j, const R& v) {
    pi[i * n + j] = v;
    pi[j * n + i] = -v;
  };
  std::visit(
      [&](const auto& k) {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, Canonical>) {
          const std::size_t m = n / 2;
          for (std::size_t i = 0; i < m; ++i) set(i, m + i, R(1.0));
        } else if constexpr (std::is_same_v<K, LogCanonical>) {
          for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
              const double a = k.a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
              if (a != 0.0) set(i, j, x[i] * x[j] * a);
            }
          }
        } else if constexpr (std::is_same_v<K, So3Dual>) {
          set(0, 1, x[2]);
          set(1, 2, x[0]);
          set(2, 0, x[1]);
        } else if constexpr (std::is_same_v<K, Counterexample2d>) {
          set(0, 1, -(x[0] * x[0] + x[1] * x[1]));
        } else {
          std::size_t idx = 0;
          for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) set(i, j, eval(k.upper[idx++], x));
          }
        }
      },
      kind_);
  return pi;
}

/// pi(x) grad, over any ring.
template <class R>
std::vector<R> contract(const std::vector<R>& pi, std::span<const R> grad) {
  const std::size_t n = grad.size();
  std::vector<R> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    R acc = pi[i * n] * grad[0];
    for (std::size_t j = 1; j < n; ++j) acc = acc + pi[i * n + j] * grad[j];
    out.push_back(std::move(acc));
  }
  return out;
}

/// {F,G}(x) = grad F^T pi(x) grad G
double bracket(const PoissonStructure& pi, const Expr& f, const Expr& g, std::span<const double> x);
double bracket_of_gradients(const Eigen::MatrixXd& pi, std::span<const double> df, std::span<const double> dg);

/// pi(x) grad H(x)
std::vector<double> ham_vector_field(const PoissonStructure& pi, const Expr& h, std::span<const double> x);

/// max over (i,j,k) of |sum_l pi_li d_l pi_jk + pi_lj d_l pi_ki + pi_lk d_l pi_ij|
double jacobi_residual(const PoissonStructure& pi, std::span<const double> x);

/// max_j |{C, x_j}(x)|
double casimir_residual(const PoissonStructure& pi, const Expr& c, std::span<const double> x);

/// Integer vectors spanning ker(a), each scaled to coprime integers.
/// Raises UsageError when the kernel has no integer basis of small height.
std::vector<std::vector<int>> integer_kernel(const Eigen::MatrixXd& a);

/// Default coordinate names: q,p for n = 2 canonical; q1..qm,p1..pm for
/// larger canonical; x1..xn otherwise.
VarList default_variables(const PoissonStructure& pi);

}  // namespace pint
