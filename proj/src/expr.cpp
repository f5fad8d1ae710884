#include "pint/expr.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <set>

namespace pint {

ParseError::ParseError(std::size_t position, std::string message)
    : std::runtime_error("parse error at column " + std::to_string(position) + ": " + message),
      position_(position),
      message_(std::move(message)) {}

Expr::Expr(NodePtr root, VarList variables) : root_(std::move(root)), vars_(std::move(variables)) {
  if (!root_ || !vars_) throw UsageError("Expr needs a root node and a variable list");
}

namespace {

NodePtr make_constant(double c) {
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprNode::Kind::Constant;
  n->value = c;
  return n;
}

NodePtr make_variable(int index) {
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprNode::Kind::Variable;
  n->index = index;
  return n;
}

bool is_const(const NodePtr& n) { return n->kind == ExprNode::Kind::Constant; }
bool is_const(const NodePtr& n, double v) { return is_const(n) && n->value == v; }

double fold_unary(UnaryFn f, double a) {
  switch (f) {
    case UnaryFn::Exp: return exp(a);
    case UnaryFn::Log: return log(a);
    case UnaryFn::Sin: return sin(a);
    case UnaryFn::Cos: return cos(a);
    case UnaryFn::Sqrt: return sqrt(a);
    case UnaryFn::Neg: return -a;
  }
  return a;
}

double fold_binary(BinaryOp op, double a, double b) {
  switch (op) {
    case BinaryOp::Add: return a + b;
    case BinaryOp::Sub: return a - b;
    case BinaryOp::Mul: return a * b;
    case BinaryOp::Div: return b == 0.0 ? std::nan("") : a / b;
    case BinaryOp::Pow: return pow(a, b);
  }
  return a;
}

NodePtr make_unary(UnaryFn f, NodePtr a) {
  if (is_const(a)) {
    try {
      const double v = fold_unary(f, a->value);
      if (std::isfinite(v)) return make_constant(v);
    } catch (const DomainError&) {
      // left unfolded; evaluation reports the domain error
    }
  }
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprNode::Kind::Unary;
  n->fn = f;
  n->lhs = std::move(a);
  return n;
}

NodePtr make_binary(BinaryOp op, NodePtr a, NodePtr b) {
  if (is_const(a) && is_const(b)) {
    try {
      const double v = fold_binary(op, a->value, b->value);
      if (std::isfinite(v)) return make_constant(v);
    } catch (const DomainError&) {
    }
  }
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprNode::Kind::Binary;
  n->op = op;
  n->lhs = std::move(a);
  n->rhs = std::move(b);
  return n;
}

bool valid_identifier(const std::string& s) {
  if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) return false;
  for (char c : s) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  }
  return true;
}

bool function_name(std::string_view name, UnaryFn& f) {
  if (name == "exp") f = UnaryFn::Exp;
  else if (name == "log") f = UnaryFn::Log;
  else if (name == "sin") f = UnaryFn::Sin;
  else if (name == "cos") f = UnaryFn::Cos;
  else if (name == "sqrt") f = UnaryFn::Sqrt;
  else return false;
  return true;
}

class Parser {
 public:
  Parser(std::string_view text, const std::vector<std::string>& vars) : text_(text), vars_(vars) {}

  NodePtr parse() {
    skip_ws();
    if (pos_ >= text_.size()) throw ParseError(column(), "empty expression");
    NodePtr e = expr();
    skip_ws();
    if (pos_ < text_.size()) throw ParseError(column(), std::string("unexpected '") + text_[pos_] + "'");
    return e;
  }

 private:
  std::size_t column() const { return pos_ + 1; }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= text_.size()) throw ParseError(column(), std::string("expected '") + c + "' before end of input");
      throw ParseError(column(), std::string("expected '") + c + "'");
    }
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+')) lhs = make_binary(BinaryOp::Add, lhs, term());
      else if (accept('-')) lhs = make_binary(BinaryOp::Sub, lhs, term());
      else return lhs;
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (accept('*')) lhs = make_binary(BinaryOp::Mul, lhs, unary());
      else if (accept('/')) lhs = make_binary(BinaryOp::Div, lhs, unary());
      else return lhs;
    }
  }

  NodePtr unary() {
    if (accept('-')) return make_unary(UnaryFn::Neg, unary());
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (accept('^')) return make_binary(BinaryOp::Pow, base, unary());
    return base;
  }

  NodePtr primary() {
    skip_ws();
    if (pos_ >= text_.size()) throw ParseError(column(), "unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr e = expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    throw ParseError(column(), std::string("unexpected '") + c + "'");
  }

  NodePtr number() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) ++pos_;
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t look = pos_ + 1;
      if (look < text_.size() && (text_[look] == '+' || text_[look] == '-')) ++look;
      if (look < text_.size() && std::isdigit(static_cast<unsigned char>(text_[look]))) {
        pos_ = look;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      }
    }
    const std::string lexeme(text_.substr(start, pos_ - start));
    char* end = nullptr;
    const double v = std::strtod(lexeme.c_str(), &end);
    if (end != lexeme.c_str() + lexeme.size() || lexeme == ".") {
      throw ParseError(start + 1, "malformed number '" + lexeme + "'");
    }
    return make_constant(v);
  }

  NodePtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) ++pos_;
    const std::string_view name = text_.substr(start, pos_ - start);
    skip_ws();
    UnaryFn f;
    if (pos_ < text_.size() && text_[pos_] == '(' && function_name(name, f)) {
      ++pos_;
      NodePtr arg = expr();
      expect(')');
      return make_unary(f, arg);
    }
    for (std::size_t i = 0; i < vars_.size(); ++i) {
      if (vars_[i] == name) return make_variable(static_cast<int>(i));
    }
    throw ParseError(start + 1, "unknown identifier '" + std::string(name) + "'");
  }

  std::string_view text_;
  const std::vector<std::string>& vars_;
  std::size_t pos_ = 0;
};

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s(buf);
  if (v < 0) return "(" + s + ")";
  return s;
}

const char* op_symbol(BinaryOp op) {
  switch (op) {
    case BinaryOp::Add: return " + ";
    case BinaryOp::Sub: return " - ";
    case BinaryOp::Mul: return " * ";
    case BinaryOp::Div: return " / ";
    case BinaryOp::Pow: return " ^ ";
  }
  return " ? ";
}

const char* fn_name(UnaryFn f) {
  switch (f) {
    case UnaryFn::Exp: return "exp";
    case UnaryFn::Log: return "log";
    case UnaryFn::Sin: return "sin";
    case UnaryFn::Cos: return "cos";
    case UnaryFn::Sqrt: return "sqrt";
    case UnaryFn::Neg: return "-";
  }
  return "?";
}

void print_node(const ExprNode& n, const std::vector<std::string>& vars, std::string& out) {
  switch (n.kind) {
    case ExprNode::Kind::Constant:
      out += format_number(n.value);
      return;
    case ExprNode::Kind::Variable:
      out += vars[static_cast<std::size_t>(n.index)];
      return;
    case ExprNode::Kind::Unary:
      if (n.fn == UnaryFn::Neg) {
        out += "(-";
        print_node(*n.lhs, vars, out);
        out += ")";
      } else {
        out += fn_name(n.fn);
        out += "(";
        print_node(*n.lhs, vars, out);
        out += ")";
      }
      return;
    case ExprNode::Kind::Binary:
      out += "(";
      print_node(*n.lhs, vars, out);
      out += op_symbol(n.op);
      print_node(*n.rhs, vars, out);
      out += ")";
      return;
  }
}

bool equal_nodes(const ExprNode& a, const ExprNode& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case ExprNode::Kind::Constant: return a.value == b.value;
    case ExprNode::Kind::Variable: return a.index == b.index;
    case ExprNode::Kind::Unary: return a.fn == b.fn && equal_nodes(*a.lhs, *b.lhs);
    case ExprNode::Kind::Binary:
      return a.op == b.op && equal_nodes(*a.lhs, *b.lhs) && equal_nodes(*a.rhs, *b.rhs);
  }
  return false;
}

// Derivative bookkeeping skips terms whose derivative is exactly zero; this
// never rewrites the user's expression itself.
NodePtr add_terms(NodePtr a, NodePtr b) {
  if (is_const(a, 0.0)) return b;
  if (is_const(b, 0.0)) return a;
  return make_binary(BinaryOp::Add, a, b);
}

NodePtr scale_by(NodePtr factor, NodePtr d) {
  if (is_const(d, 0.0)) return d;
  if (is_const(d, 1.0)) return factor;
  return make_binary(BinaryOp::Mul, factor, d);
}

NodePtr diff_node(const NodePtr& n, int index) {
  switch (n->kind) {
    case ExprNode::Kind::Constant:
      return make_constant(0.0);
    case ExprNode::Kind::Variable:
      return make_constant(n->index == index ? 1.0 : 0.0);
    case ExprNode::Kind::Unary: {
      const NodePtr& a = n->lhs;
      NodePtr da = diff_node(a, index);
      if (is_const(da, 0.0)) return da;
      switch (n->fn) {
        case UnaryFn::Neg: return make_unary(UnaryFn::Neg, da);
        case UnaryFn::Exp: return scale_by(n, da);
        case UnaryFn::Log: return make_binary(BinaryOp::Div, da, a);
        case UnaryFn::Sin: return scale_by(make_unary(UnaryFn::Cos, a), da);
        case UnaryFn::Cos: return make_unary(UnaryFn::Neg, scale_by(make_unary(UnaryFn::Sin, a), da));
        case UnaryFn::Sqrt:
          return make_binary(BinaryOp::Div, da, make_binary(BinaryOp::Mul, make_constant(2.0), n));
      }
      break;
    }
    case ExprNode::Kind::Binary: {
      const NodePtr& a = n->lhs;
      const NodePtr& b = n->rhs;
      NodePtr da = diff_node(a, index);
      NodePtr db = diff_node(b, index);
      switch (n->op) {
        case BinaryOp::Add:
          return add_terms(da, db);
        case BinaryOp::Sub:
          if (is_const(db, 0.0)) return da;
          if (is_const(da, 0.0)) return make_unary(UnaryFn::Neg, db);
          return make_binary(BinaryOp::Sub, da, db);
        case BinaryOp::Mul:
          return add_terms(scale_by(b, da), scale_by(a, db));
        case BinaryOp::Div: {
          NodePtr first = is_const(da, 0.0) ? da : make_binary(BinaryOp::Div, da, b);
          if (is_const(db, 0.0)) return first;
          NodePtr second = make_binary(BinaryOp::Div, scale_by(a, db), make_binary(BinaryOp::Mul, b, b));
          if (is_const(first, 0.0)) return make_unary(UnaryFn::Neg, second);
          return make_binary(BinaryOp::Sub, first, second);
        }
        case BinaryOp::Pow: {
          if (is_const(b)) {
            if (is_const(da, 0.0)) return da;
            const double c = b->value;
            if (c == 0.0) return make_constant(0.0);
            NodePtr coeff = make_binary(BinaryOp::Mul, make_constant(c),
                                        make_binary(BinaryOp::Pow, a, make_constant(c - 1.0)));
            return scale_by(coeff, da);
          }
          // d(a^b) = a^b (db log a + b da / a)
          NodePtr inner = add_terms(scale_by(make_unary(UnaryFn::Log, a), db),
                                    is_const(da, 0.0) ? da : make_binary(BinaryOp::Div, scale_by(b, da), a));
          return scale_by(n, inner);
        }
      }
      break;
    }
  }
  throw UsageError("malformed expression node");
}

void require_compatible(const Expr& a, const Expr& b) {
  if (!a.compatible(b)) throw UsageError("expressions over different variable lists");
}

}  // namespace

Expr Expr::constant(double c, VarList variables) { return Expr(make_constant(c), std::move(variables)); }

Expr Expr::variable(int index, VarList variables) {
  if (index < 0 || index >= static_cast<int>(variables->size())) throw UsageError("variable index out of range");
  return Expr(make_variable(index), std::move(variables));
}

bool Expr::compatible(const Expr& other) const { return vars_ == other.vars_ || *vars_ == *other.vars_; }

bool Expr::structurally_equal(const Expr& other) const {
  return compatible(other) && equal_nodes(*root_, *other.root_);
}

VarList make_variables(std::vector<std::string> names) {
  if (names.empty()) throw UsageError("variable list must not be empty");
  std::set<std::string> seen;
  for (const auto& n : names) {
    if (!valid_identifier(n)) throw UsageError("invalid variable name '" + n + "'");
    UnaryFn f;
    if (function_name(n, f)) throw UsageError("variable name '" + n + "' is reserved");
    if (!seen.insert(n).second) throw UsageError("duplicate variable name '" + n + "'");
  }
  return std::make_shared<const std::vector<std::string>>(std::move(names));
}

Expr parse(std::string_view text, const VarList& variables) {
  Parser p(text, *variables);
  return Expr(p.parse(), variables);
}

Expr parse(std::string_view text, const std::vector<std::string>& variables) {
  return parse(text, make_variables(variables));
}

std::string print(const Expr& e) {
  std::string out;
  print_node(*e.root(), e.variables(), out);
  return out;
}

Expr diff(const Expr& e, int index) {
  if (index < 0 || index >= e.arity()) throw UsageError("diff: variable index out of range");
  return Expr(diff_node(e.root(), index), e.variable_list());
}

Expr operator+(const Expr& a, const Expr& b) {
  require_compatible(a, b);
  return Expr(make_binary(BinaryOp::Add, a.root(), b.root()), a.variable_list());
}
Expr operator-(const Expr& a, const Expr& b) {
  require_compatible(a, b);
  return Expr(make_binary(BinaryOp::Sub, a.root(), b.root()), a.variable_list());
}
Expr operator*(const Expr& a, const Expr& b) {
  require_compatible(a, b);
  return Expr(make_binary(BinaryOp::Mul, a.root(), b.root()), a.variable_list());
}
Expr operator/(const Expr& a, const Expr& b) {
  require_compatible(a, b);
  return Expr(make_binary(BinaryOp::Div, a.root(), b.root()), a.variable_list());
}
Expr operator-(const Expr& a) { return Expr(make_unary(UnaryFn::Neg, a.root()), a.variable_list()); }
Expr power(const Expr& a, const Expr& b) {
  require_compatible(a, b);
  return Expr(make_binary(BinaryOp::Pow, a.root(), b.root()), a.variable_list());
}
Expr apply(UnaryFn f, const Expr& a) { return Expr(make_unary(f, a.root()), a.variable_list()); }

std::vector<double> gradient(const Expr& e, std::span<const double> x) {
  const auto lifted = dual_lift_gradient(x);
  const auto v = eval(e, std::span<const Dual<double>>(lifted));
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) g[i] = v.derivative(i);
  return g;
}

}  // namespace pint
