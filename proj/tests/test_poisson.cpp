#include "doctest.h"
#include "pint/poisson.hpp"

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

std::vector<PoissonStructure> builtins() {
  Eigen::MatrixXd cyc(3, 3);
  cyc << 0, 1, -1, -1, 0, 1, 1, -1, 0;
  return {PoissonStructure::canonical(2), PoissonStructure::canonical(4), PoissonStructure::log_canonical(lv_matrix(3)),
          PoissonStructure::log_canonical(cyc), PoissonStructure::so3_dual(), PoissonStructure::counterexample_2d()};
}

// Random quadratic polynomial text in the given variables.
std::string random_quadratic(std::mt19937_64& rng, const std::vector<std::string>& v) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::string s = std::to_string(u(rng));
  for (std::size_t i = 0; i < v.size(); ++i) {
    s += " + (" + std::to_string(u(rng)) + ")*" + v[i];
    for (std::size_t j = i; j < v.size(); ++j) s += " + (" + std::to_string(u(rng)) + ")*" + v[i] + "*" + v[j];
  }
  return s;
}

std::vector<double> random_point(std::mt19937_64& rng, int n, double lo = -2.0, double hi = 2.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> x(static_cast<std::size_t>(n));
  for (auto& c : x) c = u(rng);
  return x;
}

}  // namespace

TEST_CASE("canonical and log-canonical brackets") {
  auto can = PoissonStructure::canonical(2);
  auto q = parse("q", {"q", "p"});
  auto p = parse("p", {"q", "p"});
  std::vector<double> x{0.3, -1.2};
  CHECK(bracket(can, q, p, x) == 1.0);
  CHECK(bracket(can, p, q, x) == -1.0);

  Eigen::MatrixXd a(2, 2);
  a << 0, 1, -1, 0;
  auto lc = PoissonStructure::log_canonical(a);
  auto x1 = parse("x1", {"x1", "x2"});
  auto x2 = parse("x2", {"x1", "x2"});
  std::vector<double> pt{2.0, 3.0};
  CHECK(bracket(lc, x1, x2, pt) == 6.0);

  auto f = parse("x1^2*sin(x2)", {"x1", "x2"});
  CHECK(bracket(lc, f, f, pt) == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("hamiltonian vector fields") {
  auto can = PoissonStructure::canonical(2);
  auto h = parse("(q^2+p^2)/2", {"q", "p"});
  std::vector<double> x{1.0, 0.0};
  auto v = ham_vector_field(can, h, x);
  CHECK(v[0] == 0.0);
  CHECK(v[1] == -1.0);

  auto c = parse("3.5", {"q", "p"});
  auto z = ham_vector_field(can, c, x);
  CHECK(z[0] == 0.0);
  CHECK(z[1] == 0.0);

  // Counterexample: tangent to circles, speed |x|^2 |grad H|, counter-clockwise.
  auto ce = PoissonStructure::counterexample_2d();
  auto hc = parse("(x^2+y^2)/2", {"x", "y"});
  std::vector<double> e1{1.0, 0.0};
  auto w = ham_vector_field(ce, hc, e1);
  CHECK(w[0] == 0.0);
  CHECK(w[1] == 1.0);
  std::vector<double> r{0.6, -1.1};
  auto w2 = ham_vector_field(ce, hc, r);
  const double r2 = r[0] * r[0] + r[1] * r[1];
  CHECK(w2[0] * r[0] + w2[1] * r[1] == doctest::Approx(0.0).scale(1.0));
  CHECK(std::hypot(w2[0], w2[1]) == doctest::Approx(r2 * std::sqrt(r2)));
}

TEST_CASE("jacobi residual") {
  std::vector<double> x{0.4, -0.7, 1.3, 0.2};
  CHECK(jacobi_residual(PoissonStructure::canonical(4), x) == 0.0);

  std::vector<double> ones{1.0, 1.0, 1.0};
  auto vars = make_variables({"x", "y", "z"});
  // {x,y} = x alone satisfies Jacobi; adding {z,x} = y breaks it.
  auto good = PoissonStructure::custom({{"0", "x", "0"}, {"-x", "0", "0"}, {"0", "0", "0"}}, vars);
  CHECK(jacobi_residual(good, ones) == 0.0);
  auto bad = PoissonStructure::custom({{"0", "x", "-y"}, {"-x", "0", "0"}, {"y", "0", "0"}}, vars);
  CHECK(jacobi_residual(bad, ones) > 0.1);
  CHECK(jacobi_residual(bad, ones) == doctest::Approx(1.0));

  // Exact cancellation for log-canonical at a rational point.
  Eigen::MatrixXd a(3, 3);
  a << 0, 2, -1, -2, 0, 3, 1, -3, 0;
  std::vector<double> rational{0.5, 1.25, -2.0};
  CHECK(jacobi_residual(PoissonStructure::log_canonical(a), rational) < 1e-10);
}

TEST_CASE("built-in structures are antisymmetric and satisfy Jacobi") {
  std::mt19937_64 rng(17);
  for (const auto& pi : builtins()) {
    for (int trial = 0; trial < 100; ++trial) {
      auto x = random_point(rng, pi.dim());
      const auto m = pi.matrix(x);
      CHECK((m + m.transpose()).cwiseAbs().maxCoeff() < 1e-12);
      CHECK(jacobi_residual(pi, x) < 1e-10);
    }
  }
}

TEST_CASE("bracket antisymmetry and Leibniz rule") {
  std::mt19937_64 rng(23);
  for (const auto& pi : builtins()) {
    auto vars = default_variables(pi);
    for (int trial = 0; trial < 20; ++trial) {
      auto f = parse(random_quadratic(rng, *vars), vars);
      auto g = parse(random_quadratic(rng, *vars), vars);
      auto k = parse(random_quadratic(rng, *vars), vars);
      auto x = random_point(rng, pi.dim());
      const double fg = bracket(pi, f, g, x);
      CHECK(std::abs(fg + bracket(pi, g, f, x)) < 1e-12);
      const double lhs = bracket(pi, f * g, k, x);
      const double rhs = eval(f, x) * bracket(pi, g, k, x) + eval(g, x) * bracket(pi, f, k, x);
      CHECK(std::abs(lhs - rhs) < 1e-10 * std::max(1.0, std::abs(lhs)));
    }
  }
}

TEST_CASE("log-canonical Casimirs from integer kernel vectors") {
  auto a = lv_matrix(3);
  auto kernel = integer_kernel(a);
  REQUIRE(kernel.size() == 1);
  const auto& v = kernel[0];
  CHECK(std::abs(v[0]) == 1);
  CHECK(v[1] == -v[0]);
  CHECK(v[2] == v[0]);

  Eigen::MatrixXd b(4, 4);
  b << 0, 1, -2, 1, -1, 0, 1, 0, 2, -1, 0, -1, -1, 0, 1, 0;
  auto kb = integer_kernel(b);
  for (const auto& w : kb) {
    Eigen::VectorXd wv(4);
    for (int i = 0; i < 4; ++i) wv(i) = w[static_cast<std::size_t>(i)];
    CHECK((b * wv).norm() < 1e-12);
  }

  std::mt19937_64 rng(31);
  for (const auto& mat : {a, b}) {
    auto pi = PoissonStructure::log_canonical(mat);
    auto vars = default_variables(pi);
    auto cas = pi.default_casimirs(vars);
    CHECK(cas.size() == integer_kernel(mat).size());
    for (const auto& c : cas) {
      for (int trial = 0; trial < 50; ++trial) {
        auto x = random_point(rng, pi.dim(), 0.2, 2.0);
        CHECK(casimir_residual(pi, c, x) < 1e-10);
      }
    }
  }

  auto so3 = PoissonStructure::so3_dual();
  auto cas = so3.default_casimirs(default_variables(so3));
  REQUIRE(cas.size() == 1);
  for (int trial = 0; trial < 20; ++trial) CHECK(casimir_residual(so3, cas[0], random_point(rng, 3)) < 1e-12);
}

TEST_CASE("structure identifiers") {
  CHECK(PoissonStructure::from_id("canonical:4").dim() == 4);
  CHECK(PoissonStructure::from_id("so3_dual").dim() == 3);
  CHECK(PoissonStructure::from_id("counterexample_2d").dim() == 2);
  auto lc = PoissonStructure::from_id("log_canonical:[[0,1,1],[-1,0,1],[-1,-1,0]]");
  CHECK(lc.dim() == 3);
  CHECK(PoissonStructure::from_id(lc.id()).id() == lc.id());
  CHECK_THROWS_AS(PoissonStructure::from_id("canonical:3"), UsageError);
  CHECK_THROWS_AS(PoissonStructure::from_id("canonical:x"), UsageError);
  CHECK_THROWS_AS(PoissonStructure::from_id("log_canonical:[[0,1],[1,0]]"), UsageError);
  CHECK_THROWS_AS(PoissonStructure::from_id("torus"), UsageError);
  CHECK(*default_variables(PoissonStructure::canonical(2)) == std::vector<std::string>{"q", "p"});
  CHECK(*default_variables(PoissonStructure::canonical(4)) == std::vector<std::string>{"q1", "q2", "p1", "p2"});
}

}  // namespace pint::testing
