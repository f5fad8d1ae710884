#include "pint/hjsolver.hpp"

#include <algorithm>
#include <cmath>

namespace pint {

namespace {

using TM = TJet<MultiJet>;

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double c : v) m = std::max(m, std::abs(c));
  return m;
}

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double c : v) s += c * c;
  return std::sqrt(s);
}

// Graded ordering makes a lower-degree layout a prefix of a higher one.
MultiJet relayout(const MultiJet& a, const LayoutPtr& to) {
  if (a.is_scalar()) return MultiJet::constant(to, a.value());
  const auto c = a.coeffs();
  const auto size = static_cast<std::size_t>(to->size());
  std::vector<double> v(size, 0.0);
  std::copy_n(c.begin(), std::min(size, c.size()), v.begin());
  return MultiJet(to, std::move(v));
}

}  // namespace

GeneratingFunction::GeneratingFunction(Expr hamiltonian, BiRealisation bireal, int k)
    : h_(std::move(hamiltonian)), bireal_(std::move(bireal)), k_(k) {
  if (k_ < 1 || k_ > kMaxJetOrder) throw UsageError("generating function order must be in [1, 6]");
  if (h_.arity() != bireal_.dim()) throw UsageError("Hamiltonian arity does not match the bi-realisation dimension");
}

std::vector<MultiJet> GeneratingFunction::coefficient_jets(std::span<const double> m, int degree) const {
  const int n = dim();
  if (static_cast<int>(m.size()) != n) throw UsageError("generating function: dimension mismatch");
  // S_{i+1} uses first derivatives of S_1..S_i.
  const int d = degree + k_ - 1;
  auto lay = MonomialLayout::get(n, d);
  const MultiJet zero = MultiJet::constant(lay, 0.0);
  std::vector<MultiJet> xs;
  for (int i = 0; i < n; ++i) xs.push_back(MultiJet::variable(lay, i, m[static_cast<std::size_t>(i)]));

  std::vector<MultiJet> s{eval(h_, xs) + zero};
  for (int i = 1; i < k_; ++i) {
    std::vector<TM> base, cov;
    for (int l = 0; l < n; ++l) {
      base.push_back(TM::constant(xs[static_cast<std::size_t>(l)], i));
      std::vector<MultiJet> c(static_cast<std::size_t>(i) + 1, zero);
      for (int j = 1; j <= i; ++j) c[static_cast<std::size_t>(j)] = s[static_cast<std::size_t>(j - 1)].partial(l);
      cov.emplace_back(std::move(c));
    }
    const auto image = bireal_.alpha<TM>(base, cov);
    const TM hv = eval(h_, image);
    s.push_back(hv[i] * (1.0 / (i + 1)));
  }
  for (auto& c : s) c = c.truncated(degree);
  return s;
}

double GeneratingFunction::coefficient(int j, std::span<const double> m) const {
  if (j < 1 || j > k_) throw UsageError("generating function coefficient index out of range");
  return coefficient_jets(m, 0)[static_cast<std::size_t>(j - 1)].value();
}

GeneratingFunction::Local GeneratingFunction::local(double t, std::span<const double> m) const {
  const int n = dim();
  const auto jets = coefficient_jets(m, 2);
  Local out{0.0, std::vector<double>(static_cast<std::size_t>(n), 0.0), Eigen::MatrixXd::Zero(n, n), 0.0};
  double tp = 1.0;  // t^{j-1}
  for (int j = 1; j <= k_; ++j) {
    const auto& s = jets[static_cast<std::size_t>(j - 1)];
    out.time_derivative += j * tp * s.value();
    tp *= t;
    out.value += tp * s.value();
    for (int a = 0; a < n; ++a) {
      out.gradient[static_cast<std::size_t>(a)] += tp * s.first_derivative(a);
      for (int b = 0; b < n; ++b) out.hessian(a, b) += tp * s.second_derivative(a, b);
    }
  }
  return out;
}

GeneratingFunction hj_coefficients(const Expr& h, const BiRealisation& b, int k) { return {h, b, k}; }

double eval_S(const GeneratingFunction& gf, double t, std::span<const double> m) {
  const auto jets = gf.coefficient_jets(m, 0);
  double acc = 0.0, tp = 1.0;
  for (const auto& s : jets) {
    tp *= t;
    acc += tp * s.value();
  }
  return acc;
}

std::vector<double> grad_S(const GeneratingFunction& gf, double t, std::span<const double> m) {
  const auto jets = gf.coefficient_jets(m, 1);
  std::vector<double> g(m.size(), 0.0);
  double tp = 1.0;
  for (const auto& s : jets) {
    tp *= t;
    for (std::size_t i = 0; i < g.size(); ++i) g[i] += tp * s.first_derivative(static_cast<int>(i));
  }
  return g;
}

double hj_residual(const GeneratingFunction& gf, double t, std::span<const double> m) {
  const auto loc = gf.local(t, m);
  const auto image = gf.bireal().alpha<double>(m, loc.gradient);
  return loc.time_derivative - eval(gf.hamiltonian(), image);
}

Bisection solve_bisection(const GeneratingFunction& gf, double t, std::span<const double> x, const NewtonOptions& opts) {
  if (!(opts.tol > 0.0) || opts.max_iter < 1) throw UsageError("Newton options need tol > 0 and max_iter >= 1");
  const auto& b = gf.bireal();
  const int n = gf.dim();
  if (static_cast<int>(x.size()) != n) throw UsageError("bisection solve: dimension mismatch");
  const double scale = std::max(1.0, max_abs(x));
  std::vector<double> xbar(x.begin(), x.end());
  NewtonReport report;
  for (int iter = 0;; ++iter) {
    report.iterations = iter;
    GeneratingFunction::Local loc;
    std::vector<double> image;
    try {
      loc = gf.local(t, xbar);
      if (!(norm2(loc.gradient) < b.domain_hint())) {
        throw NewtonDiverged("covector left the bi-realisation domain", report);
      }
      image = b.alpha<double>(xbar, loc.gradient);
    } catch (const DomainError& e) {
      throw NewtonDiverged(std::string("domain error during Newton solve: ") + e.what(), report);
    }
    Eigen::VectorXd f(n);
    for (int i = 0; i < n; ++i) f(i) = image[static_cast<std::size_t>(i)] - x[static_cast<std::size_t>(i)];
    report.residual = f.cwiseAbs().maxCoeff() / scale;
    if (!std::isfinite(report.residual)) throw NewtonDiverged("non-finite Newton residual", report);
    if (report.residual <= opts.tol) return {std::move(xbar), std::move(loc.gradient), report};
    if (iter >= opts.max_iter) throw NewtonDiverged("Newton iteration did not converge", report);

    const Eigen::MatrixXd ja = alpha_jacobian(b, {xbar, loc.gradient});
    const Eigen::MatrixXd jf = ja.leftCols(n) + ja.rightCols(n) * loc.hessian;
    const Eigen::VectorXd delta = jf.fullPivLu().solve(f);
    if (!delta.allFinite()) throw NewtonDiverged("singular Newton Jacobian", report);
    for (int i = 0; i < n; ++i) xbar[static_cast<std::size_t>(i)] -= delta(i);
  }
}

double variation_function(const GeneratingFunction& gf, double t, std::span<const double> x,
                          const NewtonOptions& opts) {
  const auto bis = solve_bisection(gf, t, x, opts);
  return gf.local(t, bis.xbar).time_derivative;
}

double variation_function(const GeneratingFunction& gf, const BiRealisation& b, double t, std::span<const double> x,
                          const NewtonOptions& opts) {
  if (b.id() != gf.bireal().id() || b.dim() != gf.dim()) {
    throw UsageError("variation function: bi-realisation differs from the generating function's");
  }
  return variation_function(gf, t, x, opts);
}

TJet<MultiJet> variation_jet(const GeneratingFunction& gf, std::span<const double> x0, int order, int degree) {
  const int n = gf.dim();
  const int k = gf.order();
  if (order < 0 || order > kMaxJetOrder) throw UsageError("variation jet order must be in [0, 6]");
  // xbar = x0 + delta + u(t, delta) with u = O(t); compositions keep every
  // term of t-order <= order and spatial degree <= degree.
  const int cut = order + degree;
  const auto jets = gf.coefficient_jets(x0, cut + 1);
  const auto lay = jets.front().layout();
  const MultiJet zero = MultiJet::constant(lay, 0.0);
  const TM tzero = TM::constant(zero, order);

  std::vector<std::vector<MultiJet>> ds(static_cast<std::size_t>(k));
  for (int j = 0; j < k; ++j)
    for (int l = 0; l < n; ++l) ds[static_cast<std::size_t>(j)].push_back(jets[static_cast<std::size_t>(j)].partial(l));

  std::vector<TM> target, delta, u(static_cast<std::size_t>(n), tzero);
  for (int i = 0; i < n; ++i) {
    target.push_back(TM::constant(MultiJet::variable(lay, i, x0[static_cast<std::size_t>(i)]), order));
    delta.push_back(TM::constant(MultiJet::variable(lay, i, 0.0), order));
  }
  std::vector<TM> disp(static_cast<std::size_t>(n), tzero);
  for (int iter = 0; iter <= order; ++iter) {
    std::vector<TM> xbar, p;
    for (int i = 0; i < n; ++i) {
      disp[static_cast<std::size_t>(i)] = delta[static_cast<std::size_t>(i)] + u[static_cast<std::size_t>(i)];
      xbar.push_back(target[static_cast<std::size_t>(i)] + u[static_cast<std::size_t>(i)]);
    }
    for (int l = 0; l < n; ++l) {
      TM acc = tzero;
      for (int j = 1; j <= k && j <= order; ++j) {
        const TM term = compose(ds[static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(l)],
                                std::span<const TM>(disp), cut) + tzero;
        acc += term.shifted(j);
      }
      p.push_back(acc);
    }
    const auto image = gf.bireal().alpha<TM>(xbar, p);
    for (int i = 0; i < n; ++i)
      u[static_cast<std::size_t>(i)] -= image[static_cast<std::size_t>(i)] - target[static_cast<std::size_t>(i)];
  }
  for (int i = 0; i < n; ++i)
    disp[static_cast<std::size_t>(i)] = delta[static_cast<std::size_t>(i)] + u[static_cast<std::size_t>(i)];

  // h_t = sum_j j t^{j-1} S_j(xbar)
  TM h = tzero;
  for (int j = 1; j <= k && j <= order + 1; ++j) {
    const TM term = compose(jets[static_cast<std::size_t>(j - 1)], std::span<const TM>(disp), cut) + tzero;
    h += term.shifted(j - 1) * TM(MultiJet(static_cast<double>(j)));
  }
  const auto out_lay = MonomialLayout::get(n, degree);
  std::vector<MultiJet> coeffs;
  for (const auto& c : h.coeffs()) coeffs.push_back(relayout(c.truncated(degree), out_lay));
  return TM(std::move(coeffs));
}

std::vector<double> VariationHamiltonian::gradient(double t, std::span<const double> x) const {
  const int n = gf_.dim();
  const auto bis = solve_bisection(gf_, t, x, opts_);
  const auto jets = gf_.coefficient_jets(bis.xbar, 2);
  Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd gdot = Eigen::VectorXd::Zero(n);
  double tp = 1.0;  // t^{j-1}
  for (int j = 1; j <= gf_.order(); ++j) {
    const auto& s = jets[static_cast<std::size_t>(j - 1)];
    for (int a = 0; a < n; ++a) {
      gdot(a) += j * tp * s.first_derivative(a);
      for (int b = 0; b < n; ++b) hess(a, b) += tp * t * s.second_derivative(a, b);
    }
    tp *= t;
  }
  // h(x) = dS/dt(xbar(x)) and d xbar/dx = (J_x + J_p Hess S_t)^{-1}.
  const Eigen::MatrixXd ja = alpha_jacobian(gf_.bireal(), {bis.xbar, bis.covector});
  const Eigen::MatrixXd jf = ja.leftCols(n) + ja.rightCols(n) * hess;
  const Eigen::VectorXd g = jf.transpose().fullPivLu().solve(gdot);
  return {g.data(), g.data() + n};
}

}  // namespace pint
