// Scalar rings used for field evaluation.
//
// Every field in the library (Hamiltonians, Poisson tensors, source/target
// maps) is written once as a template over a scalar ring R and evaluated over:
//
//   double          plain values
//   Dual<T>         value + first derivatives along n spatial directions
//   MultiJet        truncated multivariate Taylor polynomial (all spatial
//                   derivatives up to a fixed total degree)
//   TJet<T>         truncated power series in the time parameter t
//
// TJet is always the outer ring: TJet<MultiJet> carries a t-expansion whose
// coefficients are spatial Taylor jets.
//
// Each ring has a "broadcast constant" state (a Dual without derivative
// vector, a MultiJet without layout, a TJet built from a coefficient) that
// combines with fully shaped values of any size. Shaped values of different
// shapes never combine silently; that raises UsageError.
#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

namespace pint {

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr int kMaxJetOrder = 6;

template <class T>
class Dual;
template <class T>
class TJet;
class MultiJet;

// ---------------------------------------------------------------------------
// double

inline double exp(double a) { return std::exp(a); }
inline double sin(double a) { return std::sin(a); }
inline double cos(double a) { return std::cos(a); }

inline double log(double a) {
  if (!(a > 0.0)) throw DomainError("log of non-positive value " + std::to_string(a));
  return std::log(a);
}

inline double sqrt(double a) {
  if (a < 0.0) throw DomainError("sqrt of negative value " + std::to_string(a));
  return std::sqrt(a);
}

inline double recip(double a) {
  if (a == 0.0) throw DomainError("division by zero");
  return 1.0 / a;
}

inline bool is_small_integer(double s) {
  return std::floor(s) == s && std::abs(s) <= 64.0;
}

inline double pow(double a, double s) {
  if (a < 0.0 && !is_small_integer(s)) {
    throw DomainError("non-integer power of negative value " + std::to_string(a));
  }
  if (a == 0.0 && s < 0.0) throw DomainError("negative power of zero");
  return std::pow(a, s);
}

inline double constant_like(double, double c) { return c; }
inline double scalar_part(double a) { return a; }

// Forward declarations so that generic code below resolves every ring.
template <class T> Dual<T> exp(const Dual<T>& a);
template <class T> Dual<T> log(const Dual<T>& a);
template <class T> Dual<T> sin(const Dual<T>& a);
template <class T> Dual<T> cos(const Dual<T>& a);
template <class T> Dual<T> sqrt(const Dual<T>& a);
template <class T> Dual<T> recip(const Dual<T>& a);
template <class T> Dual<T> pow(const Dual<T>& a, double s);
template <class T> Dual<T> constant_like(const Dual<T>& proto, double c);
template <class T> double scalar_part(const Dual<T>& a);

MultiJet exp(const MultiJet& a);
MultiJet log(const MultiJet& a);
MultiJet sin(const MultiJet& a);
MultiJet cos(const MultiJet& a);
MultiJet sqrt(const MultiJet& a);
MultiJet recip(const MultiJet& a);
MultiJet pow(const MultiJet& a, double s);
MultiJet constant_like(const MultiJet& proto, double c);
double scalar_part(const MultiJet& a);

template <class T> TJet<T> exp(const TJet<T>& a);
template <class T> TJet<T> log(const TJet<T>& a);
template <class T> TJet<T> sin(const TJet<T>& a);
template <class T> TJet<T> cos(const TJet<T>& a);
template <class T> TJet<T> sqrt(const TJet<T>& a);
template <class T> TJet<T> recip(const TJet<T>& a);
template <class T> TJet<T> pow(const TJet<T>& a, double s);
template <class T> TJet<T> constant_like(const TJet<T>& proto, double c);
template <class T> double scalar_part(const TJet<T>& a);

// ---------------------------------------------------------------------------
// Taylor coefficients f^(m)(a0)/m!, m = 0..order, computed in the ring of a0.

enum class Analytic { Exp, Log, Sin, Cos, Recip, Pow };

template <class T>
std::vector<T> taylor_coefficients(Analytic f, const T& a0, int order, double s = 0.0) {
  std::vector<T> c;
  c.reserve(static_cast<std::size_t>(order) + 1);
  switch (f) {
    case Analytic::Exp: {
      const T e = exp(a0);
      double inv_fact = 1.0;
      for (int m = 0; m <= order; ++m) {
        c.push_back(e * inv_fact);
        inv_fact /= static_cast<double>(m + 1);
      }
      break;
    }
    case Analytic::Log: {
      c.push_back(log(a0));
      if (order == 0) break;
      const T r = recip(a0);
      T rm = r;
      for (int m = 1; m <= order; ++m) {
        const double sign = (m % 2 == 1) ? 1.0 : -1.0;
        c.push_back(rm * (sign / m));
        if (m < order) rm = rm * r;
      }
      break;
    }
    case Analytic::Sin:
    case Analytic::Cos: {
      const T sv = sin(a0);
      const T cv = cos(a0);
      const int shift = (f == Analytic::Sin) ? 0 : 1;
      double inv_fact = 1.0;
      for (int m = 0; m <= order; ++m) {
        // derivative cycle of sin: sin, cos, -sin, -cos
        switch ((m + shift) % 4) {
          case 0: c.push_back(sv * inv_fact); break;
          case 1: c.push_back(cv * inv_fact); break;
          case 2: c.push_back(sv * (-inv_fact)); break;
          default: c.push_back(cv * (-inv_fact)); break;
        }
        inv_fact /= static_cast<double>(m + 1);
      }
      break;
    }
    case Analytic::Recip: {
      const T r = recip(a0);
      T rm = r;
      for (int m = 0; m <= order; ++m) {
        c.push_back(m % 2 == 0 ? rm : rm * -1.0);
        if (m < order) rm = rm * r;
      }
      break;
    }
    case Analytic::Pow: {
      T term = pow(a0, s);
      const T r = order > 0 ? recip(a0) : T(1.0);
      double binom = 1.0;
      for (int m = 0; m <= order; ++m) {
        c.push_back(term * binom);
        binom *= (s - m) / static_cast<double>(m + 1);
        if (m < order) term = term * r;
      }
      break;
    }
  }
  return c;
}

/// Evaluates sum_m c[m] * hat^m by Horner's rule; `hat` must be nilpotent in
/// the truncated ring (zero constant term).
template <class J, class T>
J horner(const std::vector<T>& c, const J& hat) {
  J acc = constant_like(hat, 0.0) + c.back();
  for (std::size_t m = c.size() - 1; m-- > 0;) acc = acc * hat + c[m];
  return acc;
}

/// Integer power by repeated squaring. Exact for negative bases.
template <class R>
R ipow(const R& a, long long e) {
  if (e < 0) return recip(ipow(a, -e));
  R result = constant_like(a, 1.0);
  R base = a;
  while (e > 0) {
    if (e & 1) result = result * base;
    e >>= 1;
    if (e > 0) base = base * base;
  }
  return result;
}

// ---------------------------------------------------------------------------
// Dual<T>: value plus gradient along n directions.

template <class T>
class Dual {
 public:
  Dual() : value_(0.0) {}
  Dual(const T& value) : value_(value) {}
  Dual(double c)
    requires(!std::is_same_v<T, double>)
      : value_(c) {}
  Dual(T value, std::vector<T> deriv) : value_(std::move(value)), deriv_(std::move(deriv)) {}

  const T& value() const { return value_; }
  const std::vector<T>& deriv() const { return deriv_; }
  bool is_constant() const { return deriv_.empty(); }
  std::size_t directions() const { return deriv_.size(); }

  T derivative(std::size_t i) const {
    if (deriv_.empty()) return constant_like(value_, 0.0);
    if (i >= deriv_.size()) throw UsageError("Dual derivative index out of range");
    return deriv_[i];
  }

  friend Dual operator+(const Dual& a, const Dual& b) {
    return Dual(a.value_ + b.value_, combine(a, b, [](const T& x, const T& y) { return x + y; }));
  }
  friend Dual operator-(const Dual& a, const Dual& b) {
    return Dual(a.value_ - b.value_, combine(a, b, [](const T& x, const T& y) { return x - y; }));
  }
  friend Dual operator-(const Dual& a) {
    std::vector<T> d;
    d.reserve(a.deriv_.size());
    for (const auto& x : a.deriv_) d.push_back(-x);
    return Dual(-a.value_, std::move(d));
  }
  friend Dual operator*(const Dual& a, const Dual& b) {
    check_shapes(a, b);
    const std::size_t n = std::max(a.deriv_.size(), b.deriv_.size());
    std::vector<T> d;
    d.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (a.deriv_.empty()) {
        d.push_back(a.value_ * b.deriv_[i]);
      } else if (b.deriv_.empty()) {
        d.push_back(a.deriv_[i] * b.value_);
      } else {
        d.push_back(a.value_ * b.deriv_[i] + a.deriv_[i] * b.value_);
      }
    }
    return Dual(a.value_ * b.value_, std::move(d));
  }
  friend Dual operator/(const Dual& a, const Dual& b) { return a * recip(b); }

  Dual& operator+=(const Dual& b) { return *this = *this + b; }
  Dual& operator-=(const Dual& b) { return *this = *this - b; }
  Dual& operator*=(const Dual& b) { return *this = *this * b; }

  /// Applies f through its first-order Taylor coefficients.
  Dual apply(Analytic f, double s = 0.0) const {
    const auto c = taylor_coefficients(f, value_, deriv_.empty() ? 0 : 1, s);
    std::vector<T> d;
    d.reserve(deriv_.size());
    for (const auto& x : deriv_) d.push_back(c[1] * x);
    return Dual(c[0], std::move(d));
  }

 private:
  static void check_shapes(const Dual& a, const Dual& b) {
    if (!a.deriv_.empty() && !b.deriv_.empty() && a.deriv_.size() != b.deriv_.size()) {
      throw UsageError("Dual direction count mismatch");
    }
  }

  template <class Op>
  static std::vector<T> combine(const Dual& a, const Dual& b, Op op) {
    check_shapes(a, b);
    if (a.deriv_.empty() && b.deriv_.empty()) return {};
    const std::size_t n = std::max(a.deriv_.size(), b.deriv_.size());
    const T zero = constant_like(a.value_, 0.0);
    std::vector<T> d;
    d.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      d.push_back(op(a.deriv_.empty() ? zero : a.deriv_[i], b.deriv_.empty() ? zero : b.deriv_[i]));
    }
    return d;
  }

  T value_;
  std::vector<T> deriv_;
};

template <class T> Dual<T> exp(const Dual<T>& a) { return a.apply(Analytic::Exp); }
template <class T> Dual<T> log(const Dual<T>& a) { return a.apply(Analytic::Log); }
template <class T> Dual<T> sin(const Dual<T>& a) { return a.apply(Analytic::Sin); }
template <class T> Dual<T> cos(const Dual<T>& a) { return a.apply(Analytic::Cos); }
template <class T> Dual<T> recip(const Dual<T>& a) { return a.apply(Analytic::Recip); }
template <class T> Dual<T> pow(const Dual<T>& a, double s) {
  if (is_small_integer(s)) return ipow(a, static_cast<long long>(s));
  return a.apply(Analytic::Pow, s);
}
template <class T> Dual<T> sqrt(const Dual<T>& a) {
  if (scalar_part(a) <= 0.0 && !a.is_constant()) throw DomainError("sqrt derivative at non-positive value");
  return Dual<T>(sqrt(a.value()), a.is_constant() ? std::vector<T>{} : a.apply(Analytic::Pow, 0.5).deriv());
}
template <class T> Dual<T> constant_like(const Dual<T>& proto, double c) {
  if (proto.is_constant()) return Dual<T>(constant_like(proto.value(), c));
  return Dual<T>(constant_like(proto.value(), c),
                 std::vector<T>(proto.directions(), constant_like(proto.value(), 0.0)));
}
template <class T> double scalar_part(const Dual<T>& a) { return scalar_part(a.value()); }

/// Lifts x so that coordinate `index` carries the unit derivative seed of a
/// single direction.
std::vector<Dual<double>> dual_lift(std::span<const double> x, int index);

/// Lifts x with the full n-direction basis, so one evaluation yields a gradient.
std::vector<Dual<double>> dual_lift_gradient(std::span<const double> x);

// ---------------------------------------------------------------------------
// MultiJet: truncated Taylor polynomial in n variables, total degree <= D.

/// Graded monomial enumeration for n variables up to total degree D.
/// Index 0 is the constant monomial; monomials of degree <= d occupy the
/// prefix [0, count_up_to(d)).
class MonomialLayout {
 public:
  struct Product {
    int lhs;
    int rhs;
    int out;
  };
  struct Derivative {
    int src;
    int dst;
    double factor;
  };

  /// Shared, immutable layout; cached per (nvars, degree).
  static std::shared_ptr<const MonomialLayout> get(int nvars, int degree);

  int nvars() const { return nvars_; }
  int degree() const { return degree_; }
  int size() const { return static_cast<int>(total_degree_.size()); }
  int total_degree(int idx) const { return total_degree_[static_cast<std::size_t>(idx)]; }
  std::span<const int> exponent(int idx) const {
    return {exponents_.data() + static_cast<std::size_t>(idx) * static_cast<std::size_t>(nvars_),
            static_cast<std::size_t>(nvars_)};
  }
  int count_up_to(int d) const;
  /// Index of the monomial with the given exponents, or -1 when beyond degree.
  int index_of(std::span<const int> exps) const;
  int unit_index(int var) const { return 1 + var; }
  /// Monomial idx = parent(idx) * x_{parent_var(idx)}; undefined for idx 0.
  int parent(int idx) const { return parent_[static_cast<std::size_t>(idx)]; }
  int parent_var(int idx) const { return parent_var_[static_cast<std::size_t>(idx)]; }
  const std::vector<Product>& products() const { return products_; }
  const std::vector<Derivative>& derivative_terms(int var) const {
    return derivatives_[static_cast<std::size_t>(var)];
  }

  MonomialLayout(int nvars, int degree);

 private:
  int nvars_;
  int degree_;
  std::vector<int> exponents_;
  std::vector<int> total_degree_;
  std::vector<int> parent_;
  std::vector<int> parent_var_;
  std::vector<int> degree_offsets_;
  std::vector<Product> products_;
  std::vector<std::vector<Derivative>> derivatives_;
};

using LayoutPtr = std::shared_ptr<const MonomialLayout>;

class MultiJet {
 public:
  MultiJet() : coeffs_{0.0} {}
  MultiJet(double c) : coeffs_{c} {}
  MultiJet(LayoutPtr layout, std::vector<double> coeffs);

  static MultiJet constant(LayoutPtr layout, double c);
  /// x_var expanded about `value`: value + delta_var.
  static MultiJet variable(LayoutPtr layout, int var, double value);

  bool is_scalar() const { return layout_ == nullptr; }
  const LayoutPtr& layout() const { return layout_; }
  double value() const { return coeffs_[0]; }
  std::span<const double> coeffs() const { return coeffs_; }
  double coefficient(int idx) const;

  /// d/dx_var as a jet in the same layout; the top degree becomes zero.
  MultiJet partial(int var) const;
  double first_derivative(int var) const;
  double second_derivative(int i, int j) const;
  std::vector<double> gradient() const;
  /// Row-major n x n.
  std::vector<double> hessian() const;

  /// Same polynomial with every coefficient above total degree d zeroed.
  MultiJet truncated(int d) const;

  friend MultiJet operator+(const MultiJet& a, const MultiJet& b);
  friend MultiJet operator-(const MultiJet& a, const MultiJet& b);
  friend MultiJet operator-(const MultiJet& a);
  friend MultiJet operator*(const MultiJet& a, const MultiJet& b);
  friend MultiJet operator/(const MultiJet& a, const MultiJet& b);
  MultiJet& operator+=(const MultiJet& b) { return *this = *this + b; }
  MultiJet& operator-=(const MultiJet& b) { return *this = *this - b; }
  MultiJet& operator*=(const MultiJet& b) { return *this = *this * b; }

  MultiJet apply(Analytic f, double s = 0.0) const;

 private:
  static const LayoutPtr& common_layout(const MultiJet& a, const MultiJet& b);

  LayoutPtr layout_;
  std::vector<double> coeffs_;
};

/// Evaluates the polynomial `poly` (centred at its expansion point) at the
/// displacement `u`, keeping monomials of total degree <= max_degree.
/// The u[i] should have zero constant term for the truncation to be exact.
template <class R>
R compose(const MultiJet& poly, std::span<const R> u, int max_degree) {
  if (poly.is_scalar()) return constant_like(u.front(), poly.value());
  const auto& lay = *poly.layout();
  if (static_cast<int>(u.size()) != lay.nvars()) throw UsageError("compose: displacement size mismatch");
  const int count = lay.count_up_to(std::min(max_degree, lay.degree()));
  std::vector<R> powers;
  powers.reserve(static_cast<std::size_t>(count));
  powers.push_back(constant_like(u.front(), 1.0));
  R result = constant_like(u.front(), poly.coefficient(0));
  for (int idx = 1; idx < count; ++idx) {
    powers.push_back(powers[static_cast<std::size_t>(lay.parent(idx))] *
                     u[static_cast<std::size_t>(lay.parent_var(idx))]);
    const double c = poly.coefficient(idx);
    if (c != 0.0) result = result + powers.back() * c;
  }
  return result;
}

// ---------------------------------------------------------------------------
// TJet<T>: power series in t truncated at order k.

template <class T>
class TJet {
 public:
  TJet() : coeffs_{T(0.0)}, broadcast_(true) {}
  TJet(const T& c) : coeffs_{c}, broadcast_(true) {}
  TJet(double c)
    requires(!std::is_same_v<T, double>)
      : coeffs_{T(c)}, broadcast_(true) {}
  explicit TJet(std::vector<T> coeffs) : coeffs_(std::move(coeffs)), broadcast_(false) {
    if (coeffs_.empty() || static_cast<int>(coeffs_.size()) > kMaxJetOrder + 1) {
      throw UsageError("TJet order must be in [0, " + std::to_string(kMaxJetOrder) + "]");
    }
  }

  static TJet constant(const T& c, int order) {
    std::vector<T> v(static_cast<std::size_t>(order) + 1, constant_like(c, 0.0));
    v[0] = c;
    return TJet(std::move(v));
  }
  /// c0 + t
  static TJet variable(const T& c0, int order) {
    auto j = constant(c0, order);
    if (order >= 1) j.coeffs_[1] = constant_like(c0, 1.0);
    return j;
  }

  bool is_broadcast() const { return broadcast_; }
  int order() const { return static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<T>& coeffs() const { return coeffs_; }

  T operator[](int j) const {
    if (j < 0) throw UsageError("negative TJet index");
    if (j < static_cast<int>(coeffs_.size())) return coeffs_[static_cast<std::size_t>(j)];
    return constant_like(coeffs_[0], 0.0);
  }

  /// Multiplies by t^s, dropping terms beyond the order.
  TJet shifted(int s) const {
    if (broadcast_) throw UsageError("cannot shift a broadcast TJet");
    std::vector<T> v(coeffs_.size(), constant_like(coeffs_[0], 0.0));
    for (std::size_t j = 0; j + static_cast<std::size_t>(s) < coeffs_.size(); ++j) v[j + static_cast<std::size_t>(s)] = coeffs_[j];
    return TJet(std::move(v));
  }

  /// Evaluates the truncated polynomial at a concrete t.
  T evaluate(double t) const {
    T acc = coeffs_.back();
    for (std::size_t m = coeffs_.size() - 1; m-- > 0;) acc = acc * t + coeffs_[m];
    return acc;
  }

  friend TJet operator+(const TJet& a, const TJet& b) {
    return zip(a, b, [](const T& x, const T& y) { return x + y; });
  }
  friend TJet operator-(const TJet& a, const TJet& b) {
    return zip(a, b, [](const T& x, const T& y) { return x - y; });
  }
  friend TJet operator-(const TJet& a) {
    TJet r = a;
    for (auto& c : r.coeffs_) c = -c;
    return r;
  }
  friend TJet operator*(const TJet& a, const TJet& b) {
    if (a.broadcast_ && b.broadcast_) return TJet(a.coeffs_[0] * b.coeffs_[0]);
    if (a.broadcast_ || b.broadcast_) {
      const TJet& jet = a.broadcast_ ? b : a;
      const T& s = a.broadcast_ ? a.coeffs_[0] : b.coeffs_[0];
      TJet r = jet;
      for (auto& c : r.coeffs_) c = c * s;
      return r;
    }
    check_orders(a, b);
    const std::size_t n = a.coeffs_.size();
    std::vector<T> v;
    v.reserve(n);
    for (std::size_t j = 0; j < n; ++j) {
      T acc = a.coeffs_[0] * b.coeffs_[j];
      for (std::size_t i = 1; i <= j; ++i) acc = acc + a.coeffs_[i] * b.coeffs_[j - i];
      v.push_back(std::move(acc));
    }
    return TJet(std::move(v));
  }
  friend TJet operator/(const TJet& a, const TJet& b) { return a * recip(b); }

  TJet& operator+=(const TJet& b) { return *this = *this + b; }
  TJet& operator-=(const TJet& b) { return *this = *this - b; }
  TJet& operator*=(const TJet& b) { return *this = *this * b; }

  TJet apply(Analytic f, double s = 0.0) const {
    const auto c = taylor_coefficients(f, coeffs_[0], broadcast_ ? 0 : order(), s);
    if (broadcast_) return TJet(c[0]);
    TJet hat = *this;
    hat.coeffs_[0] = constant_like(coeffs_[0], 0.0);
    return horner(c, hat);
  }

 private:
  static void check_orders(const TJet& a, const TJet& b) {
    if (a.coeffs_.size() != b.coeffs_.size()) {
      throw UsageError("TJet order mismatch: " + std::to_string(a.order()) + " vs " +
                       std::to_string(b.order()));
    }
  }

  template <class Op>
  static TJet zip(const TJet& a, const TJet& b, Op op) {
    if (a.broadcast_ && b.broadcast_) return TJet(op(a.coeffs_[0], b.coeffs_[0]));
    if (!a.broadcast_ && !b.broadcast_) check_orders(a, b);
    const std::size_t n = std::max(a.coeffs_.size(), b.coeffs_.size());
    std::vector<T> v;
    v.reserve(n);
    for (std::size_t j = 0; j < n; ++j) {
      const T zero = constant_like(a.coeffs_[0], 0.0);
      const T& x = j < a.coeffs_.size() ? a.coeffs_[j] : zero;
      const T& y = j < b.coeffs_.size() ? b.coeffs_[j] : zero;
      v.push_back(op(x, y));
    }
    return TJet(std::move(v));
  }

  std::vector<T> coeffs_;
  bool broadcast_;
};

template <class T> TJet<T> exp(const TJet<T>& a) { return a.apply(Analytic::Exp); }
template <class T> TJet<T> log(const TJet<T>& a) { return a.apply(Analytic::Log); }
template <class T> TJet<T> sin(const TJet<T>& a) { return a.apply(Analytic::Sin); }
template <class T> TJet<T> cos(const TJet<T>& a) { return a.apply(Analytic::Cos); }
template <class T> TJet<T> recip(const TJet<T>& a) { return a.apply(Analytic::Recip); }
template <class T> TJet<T> pow(const TJet<T>& a, double s) {
  if (is_small_integer(s)) return ipow(a, static_cast<long long>(s));
  return a.apply(Analytic::Pow, s);
}
template <class T> TJet<T> sqrt(const TJet<T>& a) {
  if (a.is_broadcast()) return TJet<T>(sqrt(a[0]));
  return a.apply(Analytic::Pow, 0.5);
}
template <class T> TJet<T> constant_like(const TJet<T>& proto, double c) {
  const T inner = constant_like(proto[0], c);
  if (proto.is_broadcast()) return TJet<T>(inner);
  return TJet<T>::constant(inner, proto.order());
}
template <class T> double scalar_part(const TJet<T>& a) { return scalar_part(a[0]); }

// Named forms of the jet operations.
template <class T> TJet<T> jet_add(const TJet<T>& a, const TJet<T>& b) { return a + b; }
template <class T> TJet<T> jet_mul(const TJet<T>& a, const TJet<T>& b) { return a * b; }
template <class T> TJet<T> jet_scale(const TJet<T>& a, const T& s) { return a * TJet<T>(s); }

enum class UnaryTag { Exp, Log, Sin, Cos, Recip, Sqrt, Pow };

template <class T>
TJet<T> jet_apply_unary(UnaryTag f, const TJet<T>& a, double exponent = 0.0) {
  switch (f) {
    case UnaryTag::Exp: return exp(a);
    case UnaryTag::Log: return log(a);
    case UnaryTag::Sin: return sin(a);
    case UnaryTag::Cos: return cos(a);
    case UnaryTag::Recip: return recip(a);
    case UnaryTag::Sqrt: return sqrt(a);
    case UnaryTag::Pow: return pow(a, exponent);
  }
  throw UsageError("unknown unary function");
}

}  // namespace pint
