#include "doctest.h"
#include "pint/hjsolver.hpp"

#include <cmath>
#include <random>

namespace pint::testing {

namespace {

std::vector<double> random_vec(std::mt19937_64& rng, int n, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> x(static_cast<std::size_t>(n));
  for (auto& c : x) c = u(rng);
  return x;
}

// Random polynomial of total degree <= 3.
std::string random_poly(std::mt19937_64& rng, const std::vector<std::string>& v, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", u(rng));
  std::string s = buf;
  const std::size_t n = v.size();
  for (std::size_t i = 0; i < n; ++i) {
    std::snprintf(buf, sizeof buf, " + (%.6f)*", u(rng));
    s += buf + v[i];
    for (std::size_t j = i; j < n; ++j) {
      std::snprintf(buf, sizeof buf, " + (%.6f)*", u(rng));
      s += buf + v[i] + "*" + v[j];
      for (std::size_t k = j; k < n; ++k) {
        std::snprintf(buf, sizeof buf, " + (%.6f)*", 0.3 * u(rng));
        s += buf + v[i] + "*" + v[j] + "*" + v[k];
      }
    }
  }
  return s;
}

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
  return {BiRealisation::canonical_symplectic(2), BiRealisation::canonical_symplectic(4),
          BiRealisation::log_canonical(lv_matrix(3)), BiRealisation::so3_cayley()};
}

}  // namespace

TEST_CASE("S_1 is the Hamiltonian") {
  std::mt19937_64 rng(3);
  for (const auto& b : builtins()) {
    const auto vars = default_variables(b.structure());
    for (int trial = 0; trial < 5; ++trial) {
      const auto h = parse(random_poly(rng, *vars), vars);
      GeneratingFunction gf(h, b, 3);
      for (int p = 0; p < 10; ++p) {
        auto m = random_vec(rng, b.dim(), -1.0, 1.0);
        CHECK(std::abs(gf.coefficient(1, m) - eval(h, m)) <= 1e-12 * std::max(1.0, std::abs(eval(h, m))));
      }
    }
  }
}

TEST_CASE("second coefficient closed forms") {
  std::mt19937_64 rng(11);
  // Log-canonical: S_2 = -1/2 sum_ij a_ij x_i x_j d_iH d_jH.
  Eigen::MatrixXd a(3, 3);
  a << 0, 1.5, -0.5, -1.5, 0, 2, 0.5, -2, 0;
  auto b = BiRealisation::log_canonical(a);
  const auto vars = default_variables(b.structure());
  for (int trial = 0; trial < 5; ++trial) {
    const auto h = parse(random_poly(rng, *vars), vars);
    GeneratingFunction gf(h, b, 2);
    for (int p = 0; p < 20; ++p) {
      auto m = random_vec(rng, 3, -2.0, 2.0);
      const auto g = gradient(h, m);
      double closed = 0.0;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) closed += a(i, j) * m[i] * m[j] * g[i] * g[j];
      closed *= -0.5;
      CHECK(std::abs(gf.coefficient(2, m) - closed) < 1e-10);
    }
  }
  // Canonical, harmonic: d/dt H(q - t p/2, p + t q/2) at 0 vanishes.
  auto bc = BiRealisation::canonical_symplectic(2);
  GeneratingFunction gh(parse("(q^2 + p^2)/2", {"q", "p"}), bc, 2);
  for (int p = 0; p < 20; ++p) {
    auto m = random_vec(rng, 2, -3.0, 3.0);
    CHECK(std::abs(gh.coefficient(2, m)) < 1e-13);
  }
}

TEST_CASE("eval_S and grad_S") {
  Eigen::MatrixXd a(2, 2);
  a << 0, 1, -1, 0;
  auto b = BiRealisation::log_canonical(a);
  const auto h = parse("x1 + x2", {"x1", "x2"});
  GeneratingFunction gf(h, b, 2);
  std::vector<double> m{1.0, 1.0};
  CHECK(eval_S(gf, 0.0, m) == 0.0);
  // a_12 + a_21 = 0, so the second-order term drops out.
  CHECK(eval_S(gf, 0.1, m) == doctest::Approx(0.2).epsilon(1e-14));

  GeneratingFunction g1(h, b, 1);
  CHECK(eval_S(g1, 0.3, m) == doctest::Approx(0.6).epsilon(1e-15));
  auto g0 = grad_S(gf, 0.0, m);
  CHECK(g0 == std::vector<double>{0.0, 0.0});
  auto gk1 = grad_S(g1, 0.3, m);
  CHECK(gk1[0] == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(gk1[1] == doctest::Approx(0.3).epsilon(1e-15));

  std::mt19937_64 rng(19);
  const double step = 1e-6;
  for (const auto& br : builtins()) {
    const auto vars = default_variables(br.structure());
    const auto hh = parse(random_poly(rng, *vars, 0.5), vars);
    GeneratingFunction g(hh, br, 4);
    for (int p = 0; p < 5; ++p) {
      auto x = random_vec(rng, br.dim(), -1.0, 1.0);
      const auto gr = grad_S(g, 0.2, x);
      for (int i = 0; i < br.dim(); ++i) {
        auto xp = x, xm = x;
        xp[static_cast<std::size_t>(i)] += step;
        xm[static_cast<std::size_t>(i)] -= step;
        const double fd = (eval_S(g, 0.2, xp) - eval_S(g, 0.2, xm)) / (2 * step);
        CHECK(std::abs(gr[static_cast<std::size_t>(i)] - fd) < 1e-5);
      }
    }
  }
  CHECK_THROWS_AS(gf.coefficient(3, m), UsageError);
  CHECK_THROWS_AS(GeneratingFunction(h, b, 7), UsageError);
  CHECK_THROWS_AS(GeneratingFunction(h, BiRealisation::so3_cayley(), 2), UsageError);
}

TEST_CASE("truncated HJ residual orders") {
  // S_2 vanishes for every built-in, and so does S_4; the residual of the
  // order-k truncation is (k+1) S_{k+1} t^k + ..., so odd k gain one order.
  std::mt19937_64 rng(23);
  for (const auto& b : builtins()) {
    const auto vars = default_variables(b.structure());
    for (int trial = 0; trial < 2; ++trial) {
      const auto h = parse(random_poly(rng, *vars, 0.5), vars);
      auto m = random_vec(rng, b.dim(), -1.0, 1.0);
      for (int k = 1; k <= 4; ++k) {
        GeneratingFunction gf(h, b, k);
        const double r1 = std::abs(hj_residual(gf, 0.1, m));
        const double r3 = std::abs(hj_residual(gf, 0.025, m));
        const double slope = std::log(r1 / r3) / std::log(4.0);
        INFO(b.id() << " k=" << k << " slope " << slope);
        CHECK(slope >= k - 0.25);
        const int expected = k % 2 ? k + 1 : k;
        CHECK(std::abs(slope - expected) <= 0.25);
      }
    }
  }
}

TEST_CASE("variation function") {
  auto b = BiRealisation::canonical_symplectic(2);
  const auto h = parse("(q^2 + p^2)/2", {"q", "p"});
  GeneratingFunction gf(h, b, 1);
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    auto x = random_vec(rng, 2, -2.0, 2.0);
    CHECK(variation_function(gf, 0.0, x) == doctest::Approx(eval(h, x)).epsilon(1e-15));
    for (double t : {0.1, 0.4, 1.0}) {
      const double a = 1.0 - t * t / 4, c = 1.0 + t * t / 4;
      const double ratio = (a * a + t * t) / (c * c * c);
      CHECK(std::abs(variation_function(gf, b, t, x) / eval(h, x) - ratio) < 1e-8);
    }
  }
  CHECK_THROWS_AS(variation_function(gf, BiRealisation::canonical_symplectic(4), 0.1, std::vector<double>{1, 0}),
                  UsageError);
}

TEST_CASE("variation jet agrees with direct evaluation") {
  auto b = BiRealisation::log_canonical(lv_matrix(3));
  const auto vars = default_variables(b.structure());
  const auto h = parse("x1 + x2^2/2 + x1*x3", vars);
  GeneratingFunction gf(h, b, 3);
  VariationHamiltonian vh(gf);
  std::vector<double> x{0.8, 1.2, 0.6};
  const auto jet = vh.expand(x, 3, 1);
  for (double t : {1e-2, 5e-3}) {
    const double direct = vh.value(t, x);
    const double series = jet.evaluate(t).value();
    CHECK(std::abs(direct - series) < 5 * std::pow(t, 4));
  }
  // Spatial gradient: jet at t = 0 versus finite differences of h_t.
  const double t = 0.05, step = 1e-6;
  const auto g = vh.gradient(t, x);
  for (int i = 0; i < 3; ++i) {
    auto xp = x, xm = x;
    xp[static_cast<std::size_t>(i)] += step;
    xm[static_cast<std::size_t>(i)] -= step;
    const double fd = (vh.value(t, xp) - vh.value(t, xm)) / (2 * step);
    CHECK(std::abs(g[static_cast<std::size_t>(i)] - fd) < 1e-6);
    CHECK(std::abs(jet[0].first_derivative(i) - gradient(h, x)[static_cast<std::size_t>(i)]) < 1e-14);
  }
}

TEST_CASE("Magnus series of the variation function is eps H") {
  std::mt19937_64 rng(41);
  std::vector<BiRealisation> cases{BiRealisation::canonical_symplectic(2), BiRealisation::log_canonical(lv_matrix(3)),
                                   BiRealisation::so3_cayley()};
  for (const auto& b : cases) {
    const auto vars = default_variables(b.structure());
    const auto h = parse(random_poly(rng, *vars, 0.5), vars);
    for (int k = 1; k <= 3; ++k) {
      auto vh = std::make_shared<VariationHamiltonian>(GeneratingFunction(h, b, k));
      MagnusSeries series(vh, b.structure(), k);
      for (int p = 0; p < 3; ++p) {
        auto x = random_vec(rng, b.dim(), -1.0, 1.0);
        const auto v = series.values(x);
        CHECK(std::abs(v[0] - eval(h, x)) < 1e-6);
        for (std::size_t i = 1; i < v.size(); ++i) CHECK(std::abs(v[i]) < 1e-6);
      }
    }
  }
}

TEST_CASE("Newton failure modes") {
  auto b = BiRealisation::so3_cayley();
  const auto vars = default_variables(b.structure());
  GeneratingFunction gf(parse("x1^2/2 + x2^2/4 + x3^2/6", vars), b, 2);
  std::vector<double> x{1.0, 0.5, 0.3};
  auto bis = solve_bisection(gf, 0.05, x);
  CHECK(bis.report.residual <= 1e-12);
  CHECK(bis.report.iterations <= 5);
  CHECK_THROWS_AS(solve_bisection(gf, 5.0, x), NewtonDiverged);
  try {
    solve_bisection(gf, 0.05, x, {1e-30, 2});
    FAIL("expected NewtonDiverged");
  } catch (const NewtonDiverged& e) {
    CHECK(e.report().iterations == 2);
  }
  CHECK_THROWS_AS(solve_bisection(gf, 0.05, x, {0.0, 5}), UsageError);
}

}  // namespace pint::testing
