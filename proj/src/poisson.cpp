#include "pint/poisson.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "json.hpp"

namespace pint {

PoissonStructure PoissonStructure::canonical(int n) {
  if (n < 2 || n % 2 != 0) throw UsageError("canonical structure needs an even dimension >= 2");
  return PoissonStructure(n, Canonical{n});
}

PoissonStructure PoissonStructure::log_canonical(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols() || a.rows() < 2) throw UsageError("log-canonical matrix must be square, n >= 2");
  if ((a + a.transpose()).cwiseAbs().maxCoeff() > 1e-12) throw UsageError("log-canonical matrix must be antisymmetric");
  return PoissonStructure(static_cast<int>(a.rows()), LogCanonical{a});
}

PoissonStructure PoissonStructure::so3_dual() { return PoissonStructure(3, So3Dual{}); }

PoissonStructure PoissonStructure::counterexample_2d() { return PoissonStructure(2, Counterexample2d{}); }

PoissonStructure PoissonStructure::custom(const std::vector<std::vector<std::string>>& entries,
                                          const VarList& variables) {
  const int n = static_cast<int>(variables->size());
  if (static_cast<int>(entries.size()) != n) throw UsageError("custom structure: matrix size must match variables");
  Custom c{n, {}};
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(entries[static_cast<std::size_t>(i)].size()) != n) {
      throw UsageError("custom structure: matrix must be square");
    }
    for (int j = i + 1; j < n; ++j) {
      c.upper.push_back(parse(entries[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)], variables));
    }
  }
  return PoissonStructure(n, std::move(c));
}

PoissonStructure PoissonStructure::from_id(const std::string& id) {
  const auto colon = id.find(':');
  const std::string head = id.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : id.substr(colon + 1);
  if (head == "canonical") {
    if (arg.empty()) throw UsageError("canonical:<n> needs a dimension");
    std::size_t used = 0;
    int n = 0;
    try {
      n = std::stoi(arg, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != arg.size()) throw UsageError("malformed dimension in '" + id + "'");
    return canonical(n);
  }
  if (head == "log_canonical") {
    nlohmann::json rows;
    try {
      rows = nlohmann::json::parse(arg);
    } catch (const nlohmann::json::exception&) {
      throw UsageError("log_canonical:<A> expects a JSON matrix, got '" + arg + "'");
    }
    if (!rows.is_array() || rows.empty()) throw UsageError("log_canonical matrix must be a non-empty list of rows");
    const auto n = static_cast<Eigen::Index>(rows.size());
    Eigen::MatrixXd a(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto& row = rows[static_cast<std::size_t>(i)];
      if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) throw UsageError("log_canonical matrix must be square");
      for (Eigen::Index j = 0; j < n; ++j) {
        if (!row[static_cast<std::size_t>(j)].is_number()) throw UsageError("log_canonical entries must be numbers");
        a(i, j) = row[static_cast<std::size_t>(j)].get<double>();
      }
    }
    return log_canonical(a);
  }
  if (id == "so3_dual") return so3_dual();
  if (id == "counterexample_2d") return counterexample_2d();
  throw UsageError("unknown Poisson structure '" + id + "'");
}

std::string PoissonStructure::id() const {
  return std::visit(
      [&](const auto& k) -> std::string {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, Canonical>) {
          return "canonical:" + std::to_string(k.n);
        } else if constexpr (std::is_same_v<K, LogCanonical>) {
          nlohmann::json rows = nlohmann::json::array();
          for (Eigen::Index i = 0; i < k.a.rows(); ++i) {
            nlohmann::json row = nlohmann::json::array();
            for (Eigen::Index j = 0; j < k.a.cols(); ++j) row.push_back(k.a(i, j));
            rows.push_back(row);
          }
          return "log_canonical:" + rows.dump();
        } else if constexpr (std::is_same_v<K, So3Dual>) {
          return "so3_dual";
        } else if constexpr (std::is_same_v<K, Counterexample2d>) {
          return "counterexample_2d";
        } else {
          return "custom:" + std::to_string(k.n);
        }
      },
      kind_);
}

Eigen::MatrixXd PoissonStructure::matrix(std::span<const double> x) const {
  const auto t = tensor(x);
  Eigen::MatrixXd m(dim_, dim_);
  for (int i = 0; i < dim_; ++i) {
    for (int j = 0; j < dim_; ++j) m(i, j) = t[static_cast<std::size_t>(i * dim_ + j)];
  }
  return m;
}

std::vector<Expr> PoissonStructure::default_casimirs(const VarList& variables) const {
  if (static_cast<int>(variables->size()) != dim_) throw UsageError("Casimir variables do not match dimension");
  std::vector<Expr> out;
  if (std::holds_alternative<So3Dual>(kind_)) {
    Expr sum = Expr::constant(0.0, variables);
    for (int i = 0; i < 3; ++i) sum = sum + power(Expr::variable(i, variables), Expr::constant(2.0, variables));
    out.push_back(sum);
  } else if (const auto* lc = std::get_if<LogCanonical>(&kind_)) {
    for (const auto& v : integer_kernel(lc->a)) {
      Expr prod = Expr::constant(1.0, variables);
      for (int i = 0; i < dim_; ++i) {
        const int e = v[static_cast<std::size_t>(i)];
        if (e == 0) continue;
        const Expr xi = Expr::variable(i, variables);
        prod = prod * (e == 1 ? xi : power(xi, Expr::constant(e, variables)));
      }
      out.push_back(prod);
    }
  }
  return out;
}

double bracket_of_gradients(const Eigen::MatrixXd& pi, std::span<const double> df, std::span<const double> dg) {
  const auto n = static_cast<Eigen::Index>(df.size());
  const Eigen::Map<const Eigen::VectorXd> a(df.data(), n);
  const Eigen::Map<const Eigen::VectorXd> b(dg.data(), n);
  return a.dot(pi * b);
}

double bracket(const PoissonStructure& pi, const Expr& f, const Expr& g, std::span<const double> x) {
  if (f.arity() != pi.dim() || g.arity() != pi.dim()) throw UsageError("bracket: dimension mismatch");
  const auto df = gradient(f, x);
  const auto dg = gradient(g, x);
  return bracket_of_gradients(pi.matrix(x), df, dg);
}

std::vector<double> ham_vector_field(const PoissonStructure& pi, const Expr& h, std::span<const double> x) {
  if (h.arity() != pi.dim()) throw UsageError("ham_vector_field: dimension mismatch");
  const auto dh = gradient(h, x);
  return contract(pi.tensor(x), std::span<const double>(dh));
}

double jacobi_residual(const PoissonStructure& pi, std::span<const double> x) {
  const int n = pi.dim();
  const auto lifted = dual_lift_gradient(x);
  const auto t = pi.tensor(std::span<const Dual<double>>(lifted));
  auto val = [&](int i, int j) { return t[static_cast<std::size_t>(i * n + j)].value(); };
  auto der = [&](int i, int j, int l) { return t[static_cast<std::size_t>(i * n + j)].derivative(static_cast<std::size_t>(l)); };
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        double s = 0.0;
        for (int l = 0; l < n; ++l) {
          s += val(l, i) * der(j, k, l) + val(l, j) * der(k, i, l) + val(l, k) * der(i, j, l);
        }
        worst = std::max(worst, std::abs(s));
      }
    }
  }
  return worst;
}

double casimir_residual(const PoissonStructure& pi, const Expr& c, std::span<const double> x) {
  const auto dc = gradient(c, x);
  const auto m = pi.matrix(x);
  double worst = 0.0;
  for (int j = 0; j < pi.dim(); ++j) {
    std::vector<double> e(static_cast<std::size_t>(pi.dim()), 0.0);
    e[static_cast<std::size_t>(j)] = 1.0;
    worst = std::max(worst, std::abs(bracket_of_gradients(m, dc, e)));
  }
  return worst;
}

std::vector<std::vector<int>> integer_kernel(const Eigen::MatrixXd& a) {
  // Reduced row echelon form with partial pivoting.
  Eigen::MatrixXd r = a;
  const Eigen::Index rows = r.rows(), cols = r.cols();
  const double tol = 1e-10 * std::max(1.0, a.cwiseAbs().maxCoeff());
  std::vector<Eigen::Index> pivots;
  Eigen::Index row = 0;
  for (Eigen::Index col = 0; col < cols && row < rows; ++col) {
    Eigen::Index best;
    const double mag = r.col(col).tail(rows - row).cwiseAbs().maxCoeff(&best);
    if (mag <= tol) continue;
    r.row(row).swap(r.row(row + best));
    r.row(row) /= r(row, col);
    for (Eigen::Index i = 0; i < rows; ++i) {
      if (i != row && r(i, col) != 0.0) r.row(i) -= r(i, col) * r.row(row);
    }
    pivots.push_back(col);
    ++row;
  }
  std::vector<std::vector<int>> basis;
  for (Eigen::Index free = 0; free < cols; ++free) {
    if (std::find(pivots.begin(), pivots.end(), free) != pivots.end()) continue;
    std::vector<double> v(static_cast<std::size_t>(cols), 0.0);
    v[static_cast<std::size_t>(free)] = 1.0;
    for (std::size_t p = 0; p < pivots.size(); ++p) {
      v[static_cast<std::size_t>(pivots[p])] = -r(static_cast<Eigen::Index>(p), free);
    }
    bool found = false;
    for (int scale = 1; scale <= 360 && !found; ++scale) {
      std::vector<int> iv;
      bool integral = true;
      for (double c : v) {
        const double s = c * scale;
        if (std::abs(s - std::round(s)) > 1e-9 || std::abs(s) > 1e6) {
          integral = false;
          break;
        }
        iv.push_back(static_cast<int>(std::lround(s)));
      }
      if (!integral) continue;
      int g = 0;
      for (int c : iv) g = std::gcd(g, std::abs(c));
      for (int& c : iv) c /= g;
      basis.push_back(iv);
      found = true;
    }
    if (!found) throw UsageError("kernel of the log-canonical matrix has no small integer basis");
  }
  return basis;
}

VarList default_variables(const PoissonStructure& pi) {
  const int n = pi.dim();
  std::vector<std::string> names;
  if (std::holds_alternative<PoissonStructure::Canonical>(pi.kind())) {
    const int m = n / 2;
    if (m == 1) {
      names = {"q", "p"};
    } else {
      for (int i = 1; i <= m; ++i) names.push_back("q" + std::to_string(i));
      for (int i = 1; i <= m; ++i) names.push_back("p" + std::to_string(i));
    }
  } else if (std::holds_alternative<PoissonStructure::Counterexample2d>(pi.kind())) {
    names = {"x", "y"};
  } else {
    for (int i = 1; i <= n; ++i) names.push_back("x" + std::to_string(i));
  }
  return make_variables(std::move(names));
}

}  // namespace pint
