#include "pint/magnus.hpp"

#include "pint/reference.hpp"

namespace pint {

boost::rational<long long> bernoulli(int i) {
  if (i < 0 || i > 16) throw UsageError("bernoulli: index must be in [0, 16]");
  using Q = boost::rational<long long>;
  // sum_{j=0..m} C(m+1, j) B_j = 0 for m >= 1
  std::vector<Q> b{Q(1)};
  for (int m = 1; m <= i; ++m) {
    Q sum(0);
    long long binom = 1;  // C(m+1, j)
    for (int j = 0; j < m; ++j) {
      sum += Q(binom) * b[static_cast<std::size_t>(j)];
      binom = binom * (m + 1 - j) / (j + 1);
    }
    b.push_back(-sum / Q(m + 1));
  }
  return b[static_cast<std::size_t>(i)];
}

// ---------------------------------------------------------------------------

ExprHamiltonian::ExprHamiltonian(Expr h, int time_index)
    : h_(std::move(h)), time_index_(time_index), dim_(h_.arity() - (time_index >= 0 ? 1 : 0)) {
  if (time_index_ >= h_.arity()) throw UsageError("time variable index out of range");
  if (dim_ < 1) throw UsageError("time-dependent Hamiltonian needs at least one space variable");
}

std::shared_ptr<ExprHamiltonian> ExprHamiltonian::parse(std::string_view text, const std::vector<std::string>& space,
                                                        const std::string& time_name) {
  std::vector<std::string> all(space);
  all.push_back(time_name);
  return std::make_shared<ExprHamiltonian>(pint::parse(text, all), static_cast<int>(space.size()));
}

std::shared_ptr<ExprHamiltonian> ExprHamiltonian::autonomous(const Expr& h) {
  return std::make_shared<ExprHamiltonian>(h, -1);
}

std::vector<double> ExprHamiltonian::with_time(double t, std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim_) throw UsageError("time-dependent Hamiltonian: dimension mismatch");
  std::vector<double> args(x.begin(), x.end());
  if (time_index_ >= 0) args.insert(args.begin() + time_index_, t);
  return args;
}

TJet<MultiJet> ExprHamiltonian::expand(std::span<const double> x, int order, int degree) const {
  if (static_cast<int>(x.size()) != dim_) throw UsageError("time-dependent Hamiltonian: dimension mismatch");
  using TM = TJet<MultiJet>;
  auto lay = MonomialLayout::get(dim_, degree);
  std::vector<TM> args;
  args.reserve(static_cast<std::size_t>(h_.arity()));
  int s = 0;
  for (int v = 0; v < h_.arity(); ++v) {
    if (v == time_index_) {
      args.push_back(TM::variable(MultiJet::constant(lay, 0.0), order));
    } else {
      args.push_back(TM::constant(MultiJet::variable(lay, s, x[static_cast<std::size_t>(s)]), order));
      ++s;
    }
  }
  return eval(h_, args);
}

double ExprHamiltonian::value(double t, std::span<const double> x) const { return eval(h_, with_time(t, x)); }

std::vector<double> ExprHamiltonian::gradient(double t, std::span<const double> x) const {
  const auto args = with_time(t, x);
  std::vector<Dual<double>> lifted;
  lifted.reserve(args.size());
  int s = 0;
  for (int v = 0; v < h_.arity(); ++v) {
    if (v == time_index_) {
      lifted.emplace_back(args[static_cast<std::size_t>(v)]);
    } else {
      std::vector<double> seed(static_cast<std::size_t>(dim_), 0.0);
      seed[static_cast<std::size_t>(s++)] = 1.0;
      lifted.emplace_back(args[static_cast<std::size_t>(v)], std::move(seed));
    }
  }
  const auto d = eval(h_, lifted);
  std::vector<double> g(static_cast<std::size_t>(dim_));
  for (int i = 0; i < dim_; ++i) g[static_cast<std::size_t>(i)] = d.derivative(static_cast<std::size_t>(i));
  return g;
}

// ---------------------------------------------------------------------------

MultiJet jet_bracket(const MultiJet& a, const MultiJet& b, const std::vector<MultiJet>& pi) {
  const auto& lay = a.layout() ? a.layout() : b.layout();
  if (!lay) return MultiJet(0.0);
  const int n = lay->nvars();
  std::vector<MultiJet> db;
  db.reserve(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) db.push_back(b.partial(j));
  MultiJet result = MultiJet::constant(lay, 0.0);
  for (int i = 0; i < n; ++i) {
    MultiJet v = MultiJet::constant(lay, 0.0);
    bool any = false;
    for (int j = 0; j < n; ++j) {
      const auto& p = pi[static_cast<std::size_t>(i * n + j)];
      if (p.is_scalar() && p.value() == 0.0) continue;
      v += p * db[static_cast<std::size_t>(j)];
      any = true;
    }
    if (any) result += a.partial(i) * v;
  }
  return result;
}

MagnusSeries::MagnusSeries(std::shared_ptr<const TimeDepHamiltonian> h, PoissonStructure pi, int k)
    : h_(std::move(h)), pi_(std::move(pi)), k_(k) {
  if (k_ < 1 || k_ > kMaxJetOrder) throw UsageError("Magnus truncation order must be in [1, 6]");
  if (h_->dim() != pi_.dim()) throw UsageError("Magnus: Hamiltonian and structure dimensions differ");
}

std::vector<MultiJet> MagnusSeries::coefficients(std::span<const double> x, int degree) const {
  const int n = pi_.dim();
  // Every bracket consumes one order of the spatial expansion.
  const int d = degree + k_ - 1;
  auto lay = MonomialLayout::get(n, d);
  std::vector<MultiJet> xs;
  for (int i = 0; i < n; ++i) xs.push_back(MultiJet::variable(lay, i, x[static_cast<std::size_t>(i)]));
  const auto pi = pi_.tensor(std::span<const MultiJet>(xs));
  const auto hj = h_->expand(x, k_ - 1, d);

  std::vector<double> weight;  // B_i / i!
  double fact = 1.0;
  for (int i = 0; i < k_; ++i) {
    if (i > 0) fact *= i;
    weight.push_back(boost::rational_cast<double>(bernoulli(i)) / fact);
  }

  std::vector<MultiJet> omega;
  for (int m = 0; m < k_; ++m) {
    // t[c] holds [eps^c] ad^i h for the current power i.
    std::vector<MultiJet> t;
    for (int c = 0; c <= m; ++c) t.push_back(hj[c] + MultiJet::constant(lay, 0.0));
    MultiJet acc = t[static_cast<std::size_t>(m)];
    for (int i = 1; i <= m; ++i) {
      std::vector<MultiJet> next(static_cast<std::size_t>(m) + 1, MultiJet::constant(lay, 0.0));
      for (int c = i; c <= m; ++c) {
        for (int a = 1; c - a >= i - 1; ++a) {
          next[static_cast<std::size_t>(c)] +=
              jet_bracket(omega[static_cast<std::size_t>(a - 1)], t[static_cast<std::size_t>(c - a)], pi);
        }
      }
      t = std::move(next);
      if (weight[static_cast<std::size_t>(i)] != 0.0) acc += t[static_cast<std::size_t>(m)] * weight[static_cast<std::size_t>(i)];
    }
    omega.push_back(acc * (1.0 / (m + 1)));
  }
  for (auto& o : omega) o = o.truncated(degree);
  return omega;
}

std::vector<double> MagnusSeries::values(std::span<const double> x) const {
  std::vector<double> out;
  for (const auto& o : coefficients(x, 0)) out.push_back(o.value());
  return out;
}

double MagnusSeries::modified_hamiltonian(double eps, std::span<const double> x) const {
  const auto v = values(x);
  double acc = 0.0, p = 1.0;
  for (double c : v) {
    p *= eps;
    acc += p * c;
  }
  return acc;
}

std::vector<double> MagnusSeries::modified_gradient(double eps, std::span<const double> x) const {
  const auto jets = coefficients(x, 1);
  std::vector<double> g(x.size(), 0.0);
  double p = 1.0;
  for (const auto& o : jets) {
    p *= eps;
    for (std::size_t i = 0; i < x.size(); ++i) g[i] += p * o.first_derivative(static_cast<int>(i));
  }
  return g;
}

MagnusSeries magnus_truncate(std::shared_ptr<const TimeDepHamiltonian> h, const PoissonStructure& pi, int k) {
  return MagnusSeries(std::move(h), pi, k);
}

std::pair<std::vector<double>, std::vector<double>> magnus_flow_check(std::shared_ptr<const TimeDepHamiltonian> h,
                                                                      const PoissonStructure& pi, int k,
                                                                      std::span<const double> x, double eps) {
  std::vector<double> x0(x.begin(), x.end());
  const auto field = [&pi](std::span<const double> at, const std::vector<double>& grad) {
    return contract(pi.tensor(at), std::span<const double>(grad));
  };
  auto flow_h = integrate_reference(
      [&](double t, const std::vector<double>& y, std::vector<double>& dy) { dy = field(y, h->gradient(t, y)); }, x0,
      0.0, eps);
  MagnusSeries series(h, pi, k);
  auto flow_omega = integrate_reference(
      [&](double, const std::vector<double>& y, std::vector<double>& dy) {
        dy = field(y, series.modified_gradient(eps, y));
      },
      x0, 0.0, 1.0);
  return {flow_h, flow_omega};
}

}  // namespace pint
