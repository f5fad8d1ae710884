#include "doctest.h"
#include "pint/birealisation.hpp"

#include <cmath>
#include <random>

namespace pint::testing {

namespace {

Eigen::MatrixXd lv_matrix(int n) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      a(i, j) = 1.0;
      a(j, i) = -1.0;
    }
  return a;
}

std::vector<BiRealisation> builtins() {
  Eigen::MatrixXd b(4, 4);
  b << 0, 1, -2, 0.5, -1, 0, 1, 0, 2, -1, 0, -1, -0.5, 0, 1, 0;
  return {BiRealisation::canonical_symplectic(2), BiRealisation::canonical_symplectic(4),
          BiRealisation::log_canonical(lv_matrix(3)), BiRealisation::log_canonical(b), BiRealisation::so3_cayley()};
}

std::vector<double> random_vec(std::mt19937_64& rng, int n, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> x(static_cast<std::size_t>(n));
  for (auto& c : x) c = u(rng);
  return x;
}

std::vector<double> random_covector(std::mt19937_64& rng, int n, double radius) {
  auto p = random_vec(rng, n, -1.0, 1.0);
  double norm = 0.0;
  for (double c : p) norm += c * c;
  norm = std::sqrt(norm);
  std::uniform_real_distribution<double> u(0.0, radius);
  const double r = u(rng);
  for (auto& c : p) c *= r / norm;
  return p;
}

std::string random_quadratic(std::mt19937_64& rng, const std::vector<std::string>& v) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::string s = std::to_string(u(rng));
  for (std::size_t i = 0; i < v.size(); ++i) {
    s += " + (" + std::to_string(u(rng)) + ")*" + v[i];
    for (std::size_t j = i; j < v.size(); ++j) s += " + (" + std::to_string(u(rng)) + ")*" + v[i] + "*" + v[j];
  }
  return s;
}

// Rodrigues rotation about p/|p| by the Cayley angle 2 atan(|p|/2).
Eigen::Matrix3d rodrigues(const Eigen::Vector3d& p) {
  const double r = p.norm();
  if (r == 0.0) return Eigen::Matrix3d::Identity();
  const double theta = 2.0 * std::atan(r / 2.0);
  const Eigen::Vector3d u = p / r;
  Eigen::Matrix3d k;
  k << 0, -u.z(), u.y(), u.z(), 0, -u.x(), -u.y(), u.x(), 0;
  return Eigen::Matrix3d::Identity() + std::sin(theta) * k + (1 - std::cos(theta)) * k * k;
}

// {F o m, G o m}_can at (x,p) versus {F,G}_pi at m(x,p), with m = alpha or beta.
double pullback_residual(const BiRealisation& b, const Expr& f, const Expr& g, const std::vector<double>& x,
                         const std::vector<double>& p, bool source) {
  const int n = b.dim();
  std::vector<double> z(x);
  z.insert(z.end(), p.begin(), p.end());
  const auto lifted = dual_lift_gradient(z);
  std::span<const Dual<double>> all(lifted);
  const auto image = source ? b.alpha(all.first(static_cast<std::size_t>(n)), all.last(static_cast<std::size_t>(n)))
                            : b.beta(all.first(static_cast<std::size_t>(n)), all.last(static_cast<std::size_t>(n)));
  const auto fa = eval(f, image);
  const auto ga = eval(g, image);
  // Canonical bracket on T*R^n: sum_i dF/dx_i dG/dp_i - dF/dp_i dG/dx_i.
  double lhs = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto xi = static_cast<std::size_t>(i), pi = static_cast<std::size_t>(n + i);
    lhs += fa.derivative(xi) * ga.derivative(pi) - fa.derivative(pi) * ga.derivative(xi);
  }
  std::vector<double> at(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) at[static_cast<std::size_t>(i)] = image[static_cast<std::size_t>(i)].value();
  const double rhs = bracket(b.structure(), f, g, at);
  return source ? lhs - rhs : lhs + rhs;
}

}  // namespace

TEST_CASE("canonical bi-realisation formulas") {
  auto b = BiRealisation::canonical_symplectic(2);
  std::vector<double> x{1.0, 2.0}, zero{0.0, 0.0}, p{0.2, 0.4};
  auto a0 = b.alpha<double>(x, zero);
  CHECK(a0 == x);
  auto a = b.alpha<double>(x, p);
  CHECK(a[0] == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(a[1] == doctest::Approx(2.1).epsilon(1e-15));
  auto be = b.beta<double>(x, p);
  CHECK(be[0] == doctest::Approx(1.2).epsilon(1e-15));
  CHECK(be[1] == doctest::Approx(1.9).epsilon(1e-15));
  CHECK_THROWS_AS(BiRealisation::canonical_symplectic(3), UsageError);
  CHECK(std::isinf(b.domain_hint()));

  auto j = alpha_jacobian(b, {x, p});
  Eigen::MatrixXd expect(2, 4);
  expect << 1, 0, 0, -0.5, 0, 1, 0.5, 0;
  CHECK((j - expect).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("log-canonical bi-realisation formulas") {
  Eigen::MatrixXd a(2, 2);
  a << 0, 1, -1, 0;
  auto b = BiRealisation::log_canonical(a);
  std::vector<double> x{1.0, 1.0}, p{0.2, 0.0};
  auto al = b.alpha<double>(x, p);
  auto be = b.beta<double>(x, p);
  CHECK(al[0] == 1.0);
  CHECK(al[1] == doctest::Approx(std::exp(0.1)).epsilon(1e-15));
  CHECK(be[0] == 1.0);
  CHECK(be[1] == doctest::Approx(0.904837418).epsilon(1e-9));
  CHECK(std::isinf(b.domain_hint()));

  Eigen::MatrixXd sym(2, 2);
  sym << 0, 1, 1, 0;
  CHECK_THROWS_AS(BiRealisation::log_canonical(sym), UsageError);

  std::mt19937_64 rng(4);
  auto b3 = BiRealisation::log_canonical(lv_matrix(3));
  for (int trial = 0; trial < 50; ++trial) {
    auto xx = random_vec(rng, 3, 0.1, 2.0);
    auto pp = random_vec(rng, 3, -1.0, 1.0);
    std::vector<double> mp{-pp[0], -pp[1], -pp[2]};
    auto lhs = b3.beta<double>(xx, mp);
    auto rhs = b3.alpha<double>(xx, pp);
    for (int i = 0; i < 3; ++i) CHECK(lhs[static_cast<std::size_t>(i)] == rhs[static_cast<std::size_t>(i)]);
  }
}

TEST_CASE("so(3) Cayley bi-realisation") {
  auto b = BiRealisation::so3_cayley();
  CHECK(b.domain_hint() == 1.9);
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    auto x = random_vec(rng, 3, -2.0, 2.0);
    auto p = random_covector(rng, 3, 1.9);
    auto al = b.alpha<double>(x, p);
    auto be = b.beta<double>(x, p);
    const Eigen::Vector3d av(al[0], al[1], al[2]), bv(be[0], be[1], be[2]), pv(p[0], p[1], p[2]);
    CHECK((rodrigues(pv) * av - bv).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((cayley(pv) - rodrigues(pv)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(std::abs(av.norm() - bv.norm()) < 1e-10);
  }
  std::vector<double> x{1.0, 0.0, 0.0}, big{2.0, 0.0, 0.0};
  CHECK_THROWS_AS(b.alpha<double>(x, big), DomainError);
}

TEST_CASE("unit laws") {
  std::mt19937_64 rng(12);
  for (const auto& b : builtins()) {
    const std::vector<double> zero(static_cast<std::size_t>(b.dim()), 0.0);
    for (int trial = 0; trial < 1000; ++trial) {
      auto x = random_vec(rng, b.dim(), -3.0, 3.0);
      auto al = b.alpha<double>(x, zero);
      auto be = b.beta<double>(x, zero);
      for (int i = 0; i < b.dim(); ++i) {
        CHECK(std::abs(al[static_cast<std::size_t>(i)] - x[static_cast<std::size_t>(i)]) <= 1e-14);
        CHECK(std::abs(be[static_cast<std::size_t>(i)] - x[static_cast<std::size_t>(i)]) <= 1e-14);
      }
    }
  }
}

TEST_CASE("alpha is Poisson and beta anti-Poisson") {
  std::mt19937_64 rng(21);
  double worst = 0.0;
  for (const auto& b : builtins()) {
    auto pi = b.structure();
    auto vars = default_variables(pi);
    for (int trial = 0; trial < 50; ++trial) {
      auto f = parse(random_quadratic(rng, *vars), vars);
      auto g = parse(random_quadratic(rng, *vars), vars);
      auto x = random_vec(rng, b.dim(), -2.0, 2.0);
      auto p = random_covector(rng, b.dim(), 0.3);
      const double rs = pullback_residual(b, f, g, x, p, true);
      const double rt = pullback_residual(b, f, g, x, p, false);
      worst = std::max({worst, std::abs(rs), std::abs(rt)});
      CHECK(std::abs(rs) < 1e-6);
      CHECK(std::abs(rt) < 1e-6);
    }
  }
  MESSAGE("worst pullback residual " << worst);
}

TEST_CASE("alpha Jacobian matches finite differences") {
  std::mt19937_64 rng(33);
  const double h = 1e-6;
  for (const auto& b : builtins()) {
    const int n = b.dim();
    for (int trial = 0; trial < 20; ++trial) {
      CotangentPoint pt{random_vec(rng, n, 0.2, 2.0), random_covector(rng, n, 0.8)};
      auto j = alpha_jacobian(b, pt);
      for (int c = 0; c < 2 * n; ++c) {
        auto plus = pt, minus = pt;
        auto& vp = c < n ? plus.base : plus.covector;
        auto& vm = c < n ? minus.base : minus.covector;
        vp[static_cast<std::size_t>(c % n)] += h;
        vm[static_cast<std::size_t>(c % n)] -= h;
        auto ap = b.alpha<double>(plus.base, plus.covector);
        auto am = b.alpha<double>(minus.base, minus.covector);
        for (int r = 0; r < n; ++r) {
          const double fd = (ap[static_cast<std::size_t>(r)] - am[static_cast<std::size_t>(r)]) / (2 * h);
          CHECK(std::abs(j(r, c) - fd) < 1e-5);
        }
      }
    }
  }
}

TEST_CASE("structure lookup") {
  CHECK(BiRealisation::for_structure(PoissonStructure::so3_dual()).id() == "so3_cayley");
  CHECK(BiRealisation::for_structure(PoissonStructure::canonical(4)).id() == "canonical:4");
  CHECK_THROWS_AS(BiRealisation::for_structure(PoissonStructure::counterexample_2d()), UsageError);
}

}  // namespace pint::testing
