#include "pint/jet.hpp"

#include <map>
#include <mutex>

namespace pint {

std::vector<Dual<double>> dual_lift(std::span<const double> x, int index) {
  if (index < 0 || static_cast<std::size_t>(index) >= x.size()) {
    throw UsageError("dual_lift: direction index " + std::to_string(index) + " out of range");
  }
  std::vector<Dual<double>> out;
  out.reserve(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    out.emplace_back(x[i], std::vector<double>{i == static_cast<std::size_t>(index) ? 1.0 : 0.0});
  }
  return out;
}

std::vector<Dual<double>> dual_lift_gradient(std::span<const double> x) {
  std::vector<Dual<double>> out;
  out.reserve(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    std::vector<double> seed(x.size(), 0.0);
    seed[i] = 1.0;
    out.emplace_back(x[i], std::move(seed));
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

// Enumerates exponent vectors of total degree d in lexicographically
// decreasing order (x0^d first).
void enumerate_degree(int nvars, int d, int var, std::vector<int>& current, std::vector<int>& out) {
  if (var == nvars - 1) {
    current[static_cast<std::size_t>(var)] = d;
    out.insert(out.end(), current.begin(), current.end());
    current[static_cast<std::size_t>(var)] = 0;
    return;
  }
  for (int e = d; e >= 0; --e) {
    current[static_cast<std::size_t>(var)] = e;
    enumerate_degree(nvars, d - e, var + 1, current, out);
  }
  current[static_cast<std::size_t>(var)] = 0;
}

long long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

MonomialLayout::MonomialLayout(int nvars, int degree) : nvars_(nvars), degree_(degree) {
  if (nvars < 1) throw UsageError("MultiJet needs at least one variable");
  if (degree < 0) throw UsageError("MultiJet degree must be non-negative");
  std::vector<int> current(static_cast<std::size_t>(nvars), 0);
  degree_offsets_.push_back(0);
  for (int d = 0; d <= degree; ++d) {
    enumerate_degree(nvars, d, 0, current, exponents_);
    const int count = static_cast<int>(exponents_.size()) / nvars;
    total_degree_.resize(static_cast<std::size_t>(count), d);
    degree_offsets_.push_back(count);
  }
  const int size = this->size();

  parent_.assign(static_cast<std::size_t>(size), -1);
  parent_var_.assign(static_cast<std::size_t>(size), -1);
  std::vector<int> e(static_cast<std::size_t>(nvars));
  for (int idx = 1; idx < size; ++idx) {
    auto ex = exponent(idx);
    std::copy(ex.begin(), ex.end(), e.begin());
    for (int v = 0; v < nvars; ++v) {
      if (e[static_cast<std::size_t>(v)] > 0) {
        --e[static_cast<std::size_t>(v)];
        parent_[static_cast<std::size_t>(idx)] = index_of(e);
        parent_var_[static_cast<std::size_t>(idx)] = v;
        break;
      }
    }
  }

  for (int a = 0; a < size; ++a) {
    for (int b = 0; b < size && total_degree(a) + total_degree(b) <= degree; ++b) {
      auto ea = exponent(a);
      auto eb = exponent(b);
      for (int v = 0; v < nvars; ++v) {
        e[static_cast<std::size_t>(v)] = ea[static_cast<std::size_t>(v)] + eb[static_cast<std::size_t>(v)];
      }
      products_.push_back({a, b, index_of(e)});
    }
  }

  derivatives_.resize(static_cast<std::size_t>(nvars));
  for (int v = 0; v < nvars; ++v) {
    for (int idx = 1; idx < size; ++idx) {
      auto ex = exponent(idx);
      const int power = ex[static_cast<std::size_t>(v)];
      if (power == 0) continue;
      std::copy(ex.begin(), ex.end(), e.begin());
      --e[static_cast<std::size_t>(v)];
      derivatives_[static_cast<std::size_t>(v)].push_back({idx, index_of(e), static_cast<double>(power)});
    }
  }
}

int MonomialLayout::count_up_to(int d) const {
  if (d < 0) return 0;
  if (d > degree_) d = degree_;
  return degree_offsets_[static_cast<std::size_t>(d) + 1];
}

int MonomialLayout::index_of(std::span<const int> exps) const {
  int d = 0;
  for (int e : exps) d += e;
  if (d > degree_) return -1;
  // Rank within degree d in lexicographically decreasing order.
  int rank = 0;
  int remaining = d;
  for (int v = 0; v < nvars_ - 1; ++v) {
    const int e = exps[static_cast<std::size_t>(v)];
    // Exponent vectors with a larger value at v come first.
    for (int larger = remaining; larger > e; --larger) {
      rank += static_cast<int>(binomial(remaining - larger + (nvars_ - v - 2), nvars_ - v - 2));
    }
    remaining -= e;
  }
  return degree_offsets_[static_cast<std::size_t>(d)] + rank;
}

std::shared_ptr<const MonomialLayout> MonomialLayout::get(int nvars, int degree) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::shared_ptr<const MonomialLayout>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{nvars, degree}];
  if (!slot) slot = std::make_shared<const MonomialLayout>(nvars, degree);
  return slot;
}

// ---------------------------------------------------------------------------

MultiJet::MultiJet(LayoutPtr layout, std::vector<double> coeffs)
    : layout_(std::move(layout)), coeffs_(std::move(coeffs)) {
  const std::size_t expected = layout_ ? static_cast<std::size_t>(layout_->size()) : 1;
  if (coeffs_.size() != expected) throw UsageError("MultiJet coefficient count does not match layout");
}

MultiJet MultiJet::constant(LayoutPtr layout, double c) {
  std::vector<double> v(static_cast<std::size_t>(layout->size()), 0.0);
  v[0] = c;
  return MultiJet(std::move(layout), std::move(v));
}

MultiJet MultiJet::variable(LayoutPtr layout, int var, double value) {
  if (var < 0 || var >= layout->nvars()) throw UsageError("MultiJet variable index out of range");
  MultiJet j = constant(layout, value);
  if (layout->degree() >= 1) j.coeffs_[static_cast<std::size_t>(layout->unit_index(var))] = 1.0;
  return j;
}

double MultiJet::coefficient(int idx) const {
  if (idx < 0 || static_cast<std::size_t>(idx) >= coeffs_.size()) return 0.0;
  return coeffs_[static_cast<std::size_t>(idx)];
}

MultiJet MultiJet::partial(int var) const {
  if (!layout_) return MultiJet(0.0);
  if (var < 0 || var >= layout_->nvars()) throw UsageError("MultiJet::partial index out of range");
  std::vector<double> v(coeffs_.size(), 0.0);
  for (const auto& d : layout_->derivative_terms(var)) {
    v[static_cast<std::size_t>(d.dst)] += d.factor * coeffs_[static_cast<std::size_t>(d.src)];
  }
  return MultiJet(layout_, std::move(v));
}

double MultiJet::first_derivative(int var) const {
  if (!layout_ || layout_->degree() < 1) return 0.0;
  return coeffs_[static_cast<std::size_t>(layout_->unit_index(var))];
}

double MultiJet::second_derivative(int i, int j) const {
  if (!layout_ || layout_->degree() < 2) return 0.0;
  std::vector<int> e(static_cast<std::size_t>(layout_->nvars()), 0);
  ++e[static_cast<std::size_t>(i)];
  ++e[static_cast<std::size_t>(j)];
  const double c = coefficient(layout_->index_of(e));
  return i == j ? 2.0 * c : c;
}

std::vector<double> MultiJet::gradient() const {
  if (!layout_) throw UsageError("gradient of a scalar MultiJet has no dimension");
  std::vector<double> g(static_cast<std::size_t>(layout_->nvars()));
  for (int i = 0; i < layout_->nvars(); ++i) g[static_cast<std::size_t>(i)] = first_derivative(i);
  return g;
}

std::vector<double> MultiJet::hessian() const {
  if (!layout_) throw UsageError("hessian of a scalar MultiJet has no dimension");
  const int n = layout_->nvars();
  std::vector<double> h(static_cast<std::size_t>(n * n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) h[static_cast<std::size_t>(i * n + j)] = second_derivative(i, j);
  }
  return h;
}

MultiJet MultiJet::truncated(int d) const {
  if (!layout_) return *this;
  MultiJet r = *this;
  for (std::size_t idx = static_cast<std::size_t>(layout_->count_up_to(d)); idx < r.coeffs_.size(); ++idx) {
    r.coeffs_[idx] = 0.0;
  }
  return r;
}

const LayoutPtr& MultiJet::common_layout(const MultiJet& a, const MultiJet& b) {
  if (a.layout_ && b.layout_ && a.layout_ != b.layout_) {
    throw UsageError("MultiJet layout mismatch");
  }
  return a.layout_ ? a.layout_ : b.layout_;
}

MultiJet operator+(const MultiJet& a, const MultiJet& b) {
  const auto& lay = MultiJet::common_layout(a, b);
  if (!lay) return MultiJet(a.coeffs_[0] + b.coeffs_[0]);
  MultiJet r = a.layout_ ? a : b;
  const MultiJet& other = a.layout_ ? b : a;
  if (other.layout_) {
    for (std::size_t i = 0; i < r.coeffs_.size(); ++i) r.coeffs_[i] = a.coeffs_[i] + b.coeffs_[i];
  } else {
    r.coeffs_[0] += other.coeffs_[0];
  }
  return r;
}

MultiJet operator-(const MultiJet& a) {
  MultiJet r = a;
  for (auto& c : r.coeffs_) c = -c;
  return r;
}

MultiJet operator-(const MultiJet& a, const MultiJet& b) { return a + (-b); }

MultiJet operator*(const MultiJet& a, const MultiJet& b) {
  const auto& lay = MultiJet::common_layout(a, b);
  if (!lay) return MultiJet(a.coeffs_[0] * b.coeffs_[0]);
  if (!a.layout_ || !b.layout_) {
    MultiJet r = a.layout_ ? a : b;
    const double s = a.layout_ ? b.coeffs_[0] : a.coeffs_[0];
    for (auto& c : r.coeffs_) c *= s;
    return r;
  }
  std::vector<double> v(a.coeffs_.size(), 0.0);
  const double* pa = a.coeffs_.data();
  const double* pb = b.coeffs_.data();
  for (const auto& p : lay->products()) {
    v[static_cast<std::size_t>(p.out)] += pa[p.lhs] * pb[p.rhs];
  }
  return MultiJet(lay, std::move(v));
}

MultiJet operator/(const MultiJet& a, const MultiJet& b) { return a * recip(b); }

MultiJet MultiJet::apply(Analytic f, double s) const {
  const int degree = layout_ ? layout_->degree() : 0;
  const auto c = taylor_coefficients(f, coeffs_[0], degree, s);
  if (!layout_ || degree == 0) {
    MultiJet r = *this;
    r.coeffs_[0] = c[0];
    return r;
  }
  MultiJet hat = *this;
  hat.coeffs_[0] = 0.0;
  return horner(c, hat);
}

MultiJet exp(const MultiJet& a) { return a.apply(Analytic::Exp); }
MultiJet log(const MultiJet& a) { return a.apply(Analytic::Log); }
MultiJet sin(const MultiJet& a) { return a.apply(Analytic::Sin); }
MultiJet cos(const MultiJet& a) { return a.apply(Analytic::Cos); }
MultiJet recip(const MultiJet& a) { return a.apply(Analytic::Recip); }

MultiJet pow(const MultiJet& a, double s) {
  if (is_small_integer(s)) return ipow(a, static_cast<long long>(s));
  return a.apply(Analytic::Pow, s);
}

MultiJet sqrt(const MultiJet& a) {
  if (a.is_scalar() || a.layout()->degree() == 0) return MultiJet(a.layout(), {sqrt(a.value())});
  return a.apply(Analytic::Pow, 0.5);
}

MultiJet constant_like(const MultiJet& proto, double c) {
  if (proto.is_scalar()) return MultiJet(c);
  return MultiJet::constant(proto.layout(), c);
}

double scalar_part(const MultiJet& a) { return a.value(); }

}  // namespace pint
