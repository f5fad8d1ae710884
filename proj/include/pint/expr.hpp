// Scalar fields on R^n given as text.
//
// Grammar (whitespace insignificant):
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?          right-associative
//   primary := number | identifier | identifier '(' expr ')' | '(' expr ')'
// Functions: exp, log, sin, cos, sqrt.
#pragma once

#include <cmath>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pint/jet.hpp"

namespace pint {

class ParseError : public std::runtime_error {
 public:
  /// `position` is a 1-based character column; input length + 1 means end of input.
  ParseError(std::size_t position, std::string message);
  std::size_t position() const { return position_; }
  const std::string& message() const { return message_; }

 private:
  std::size_t position_;
  std::string message_;
};

enum class BinaryOp { Add, Sub, Mul, Div, Pow };
enum class UnaryFn { Exp, Log, Sin, Cos, Sqrt, Neg };

struct ExprNode {
  enum class Kind { Constant, Variable, Binary, Unary };
  Kind kind = Kind::Constant;
  double value = 0.0;
  int index = -1;
  BinaryOp op = BinaryOp::Add;
  UnaryFn fn = UnaryFn::Neg;
  std::shared_ptr<const ExprNode> lhs;
  std::shared_ptr<const ExprNode> rhs;
};

using NodePtr = std::shared_ptr<const ExprNode>;
using VarList = std::shared_ptr<const std::vector<std::string>>;

class Expr {
 public:
  Expr(NodePtr root, VarList variables);

  static Expr constant(double c, VarList variables);
  static Expr variable(int index, VarList variables);

  const NodePtr& root() const { return root_; }
  const VarList& variable_list() const { return vars_; }
  const std::vector<std::string>& variables() const { return *vars_; }
  int arity() const { return static_cast<int>(vars_->size()); }
  bool is_constant() const { return root_->kind == ExprNode::Kind::Constant; }

  /// Variables are the same names in the same order.
  bool compatible(const Expr& other) const;
  bool structurally_equal(const Expr& other) const;

 private:
  NodePtr root_;
  VarList vars_;
};

/// Validates names ([a-zA-Z][a-zA-Z0-9_]*, distinct, non-empty list).
VarList make_variables(std::vector<std::string> names);

Expr parse(std::string_view text, const std::vector<std::string>& variables);
Expr parse(std::string_view text, const VarList& variables);

/// Canonical text form; parse(print(e)) is structurally equal to e.
std::string print(const Expr& e);

/// Symbolic partial derivative with respect to variable `index`.
Expr diff(const Expr& e, int index);

// Builders. Constant operands are folded.
Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr power(const Expr& a, const Expr& b);
Expr apply(UnaryFn f, const Expr& a);

namespace detail {

template <class R>
R divide(const R& a, const R& b) {
  if constexpr (std::is_same_v<R, double>) {
    if (b == 0.0) throw DomainError("division by zero");
  }
  return a / b;
}

template <class R>
R eval_node(const ExprNode& n, std::span<const R> x) {
  using K = ExprNode::Kind;
  switch (n.kind) {
    case K::Constant:
      return R(n.value);
    case K::Variable:
      return x[static_cast<std::size_t>(n.index)];
    case K::Unary: {
      const R a = eval_node(*n.lhs, x);
      switch (n.fn) {
        case UnaryFn::Exp: return exp(a);
        case UnaryFn::Log: return log(a);
        case UnaryFn::Sin: return sin(a);
        case UnaryFn::Cos: return cos(a);
        case UnaryFn::Sqrt: return sqrt(a);
        case UnaryFn::Neg: return -a;
      }
      break;
    }
    case K::Binary: {
      const R a = eval_node(*n.lhs, x);
      if (n.op == BinaryOp::Pow) {
        if (n.rhs->kind == K::Constant) return pow(a, n.rhs->value);
        return exp(eval_node(*n.rhs, x) * log(a));
      }
      if (n.rhs->kind == K::Constant) {
        const double c = n.rhs->value;
        switch (n.op) {
          case BinaryOp::Add: return a + R(c);
          case BinaryOp::Sub: return a - R(c);
          case BinaryOp::Mul: return a * R(c);
          case BinaryOp::Div:
            if (c == 0.0) throw DomainError("division by zero");
            if constexpr (std::is_same_v<R, double>) {
              return a / c;
            } else {
              return a * R(1.0 / c);
            }
          default: break;
        }
      }
      const R b = eval_node(*n.rhs, x);
      switch (n.op) {
        case BinaryOp::Add: return a + b;
        case BinaryOp::Sub: return a - b;
        case BinaryOp::Mul: return a * b;
        case BinaryOp::Div: return divide(a, b);
        default: break;
      }
      break;
    }
  }
  throw UsageError("malformed expression node");
}

}  // namespace detail

/// Evaluates e over any scalar ring. Raises DomainError when a function is
/// evaluated outside its domain or the value is not finite.
template <class R>
R eval(const Expr& e, std::span<const R> point) {
  if (static_cast<int>(point.size()) != e.arity()) {
    throw UsageError("eval: expected " + std::to_string(e.arity()) + " coordinates, got " +
                     std::to_string(point.size()));
  }
  // Adding a shaped zero turns a broadcast constant into a full ring element.
  R result = detail::eval_node(*e.root(), point) + constant_like(point.front(), 0.0);
  if (!std::isfinite(scalar_part(result))) throw DomainError("expression evaluated to a non-finite value");
  return result;
}

template <class R>
R eval(const Expr& e, const std::vector<R>& point) {
  return eval(e, std::span<const R>(point));
}

/// Gradient of e at x via one Dual evaluation.
std::vector<double> gradient(const Expr& e, std::span<const double> x);

}  // namespace pint
