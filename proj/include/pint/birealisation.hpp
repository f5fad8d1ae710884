// Source/target maps alpha, beta : T*R^n -> R^n of local symplectic
// groupoids. T*R^n carries the canonical bracket {x_i, p_j} = delta_ij;
// alpha is a Poisson map, beta anti-Poisson, alpha(x,0) = beta(x,0) = x.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "pint/jet.hpp"
#include "pint/poisson.hpp"

namespace pint {

struct CotangentPoint {
  std::vector<double> base;
  std::vector<double> covector;
};

class BiRealisation {
 public:
  /// On R^{2m} = T*R^m with coordinates (q, p) and covector (xi_q, xi_p):
  /// alpha = (q - xi_p/2, p + xi_q/2), beta = (q + xi_p/2, p - xi_q/2).
  struct Canonical {
    int n;
  };
  /// alpha_j = exp(+1/2 sum_i a_ij x_i p_i) x_j, beta with the opposite sign.
  struct LogCanonical {
    Eigen::MatrixXd a;
  };
  /// Cotangent lift of the Cayley chart on SO(3):
  /// alpha = x - (p x x)/2 + (p.x) p/4, beta = x + (p x x)/2 + (p.x) p/4,
  /// so beta = cay(p^) alpha with cay(p^) = (I + p^/2)(I - p^/2)^{-1}.
  struct So3Cayley {};

  static BiRealisation canonical_symplectic(int n);
  static BiRealisation log_canonical(const Eigen::MatrixXd& a);
  static BiRealisation so3_cayley();

  /// Bi-realisation matching a built-in Poisson structure.
  static BiRealisation for_structure(const PoissonStructure& pi);

  int dim() const { return dim_; }
  std::string id() const;
  /// Radius of the trusted covector ball.
  double domain_hint() const;
  PoissonStructure structure() const;

  template <class R>
  std::vector<R> alpha(std::span<const R> x, std::span<const R> p) const {
    return map(x, p, 1.0);
  }
  template <class R>
  std::vector<R> beta(std::span<const R> x, std::span<const R> p) const {
    return map(x, p, -1.0);
  }

 private:
  using Kind = std::variant<Canonical, LogCanonical, So3Cayley>;
  BiRealisation(int dim, Kind kind) : dim_(dim), kind_(std::move(kind)) {}

  template <class R>
  std::vector<R> map(std::span<const R> x, std::span<const R> p, double s) const;

  int dim_;
  Kind kind_;
};

template <class R>
std::vector<R> BiRealisation::map(std::span<const R> x, std::span<const R> p, double s) const {
  const std::size_t n = static_cast<std::size_t>(dim_);
  if (x.size() != n || p.size() != n) throw UsageError("bi-realisation: dimension mismatch");
  std::vector<R> out;
  out.reserve(n);
  std::visit(
      [&](const auto& k) {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, Canonical>) {
          const std::size_t m = n / 2;
          for (std::size_t i = 0; i < m; ++i) out.push_back(x[i] - p[m + i] * (0.5 * s));
          for (std::size_t i = 0; i < m; ++i) out.push_back(x[m + i] + p[i] * (0.5 * s));
        } else if constexpr (std::is_same_v<K, LogCanonical>) {
          std::vector<R> xp;
          xp.reserve(n);
          for (std::size_t i = 0; i < n; ++i) xp.push_back(x[i] * p[i]);
          for (std::size_t j = 0; j < n; ++j) {
            R e = R(0.0);
            for (std::size_t i = 0; i < n; ++i) {
              const double a = k.a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
              if (a != 0.0) e = e + xp[i] * a;
            }
            out.push_back(exp(e * (0.5 * s)) * x[j]);
          }
        } else {
          double norm2 = 0.0;
          for (std::size_t i = 0; i < 3; ++i) norm2 += scalar_part(p[i]) * scalar_part(p[i]);
          if (!(norm2 < 4.0)) throw DomainError("covector outside the Cayley chart (|p| >= 2)");
          const R dot = p[0] * x[0] + p[1] * x[1] + p[2] * x[2];
          const R c0 = p[1] * x[2] - p[2] * x[1];
          const R c1 = p[2] * x[0] - p[0] * x[2];
          const R c2 = p[0] * x[1] - p[1] * x[0];
          const R q = dot * 0.25;
          out.push_back(x[0] - c0 * (0.5 * s) + q * p[0]);
          out.push_back(x[1] - c1 * (0.5 * s) + q * p[1]);
          out.push_back(x[2] - c2 * (0.5 * s) + q * p[2]);
        }
      },
      kind_);
  return out;
}

/// n x 2n Jacobian of alpha at pt, columns ordered (base, covector).
Eigen::MatrixXd alpha_jacobian(const BiRealisation& b, const CotangentPoint& pt);
Eigen::MatrixXd beta_jacobian(const BiRealisation& b, const CotangentPoint& pt);

/// 3x3 matrix of cay(p^) = (I + p^/2)(I - p^/2)^{-1}.
Eigen::Matrix3d cayley(const Eigen::Vector3d& p);
Eigen::Matrix3d hat(const Eigen::Vector3d& v);

}  // namespace pint
