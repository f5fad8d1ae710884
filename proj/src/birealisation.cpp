#include "pint/birealisation.hpp"

namespace pint {

BiRealisation BiRealisation::canonical_symplectic(int n) {
  if (n < 2 || n % 2 != 0) throw UsageError("canonical bi-realisation needs an even dimension >= 2");
  return BiRealisation(n, Canonical{n});
}

BiRealisation BiRealisation::log_canonical(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols() || a.rows() < 2) throw UsageError("log-canonical matrix must be square, n >= 2");
  if ((a + a.transpose()).cwiseAbs().maxCoeff() > 1e-12) throw UsageError("log-canonical matrix must be antisymmetric");
  return BiRealisation(static_cast<int>(a.rows()), LogCanonical{a});
}

BiRealisation BiRealisation::so3_cayley() { return BiRealisation(3, So3Cayley{}); }

BiRealisation BiRealisation::for_structure(const PoissonStructure& pi) {
  return std::visit(
      [&](const auto& k) -> BiRealisation {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, PoissonStructure::Canonical>) {
          return canonical_symplectic(k.n);
        } else if constexpr (std::is_same_v<K, PoissonStructure::LogCanonical>) {
          return log_canonical(k.a);
        } else if constexpr (std::is_same_v<K, PoissonStructure::So3Dual>) {
          return so3_cayley();
        } else {
          throw UsageError("no bi-realisation available for structure '" + pi.id() + "'");
        }
      },
      pi.kind());
}

std::string BiRealisation::id() const {
  if (const auto* c = std::get_if<Canonical>(&kind_)) return "canonical:" + std::to_string(c->n);
  if (std::holds_alternative<LogCanonical>(kind_)) return "log_canonical";
  return "so3_cayley";
}

double BiRealisation::domain_hint() const {
  if (std::holds_alternative<So3Cayley>(kind_)) return 1.9;
  return std::numeric_limits<double>::infinity();
}

PoissonStructure BiRealisation::structure() const {
  if (const auto* c = std::get_if<Canonical>(&kind_)) return PoissonStructure::canonical(c->n);
  if (const auto* l = std::get_if<LogCanonical>(&kind_)) return PoissonStructure::log_canonical(l->a);
  return PoissonStructure::so3_dual();
}

namespace {

Eigen::MatrixXd jacobian(const BiRealisation& b, const CotangentPoint& pt, bool source) {
  const int n = b.dim();
  if (static_cast<int>(pt.base.size()) != n || static_cast<int>(pt.covector.size()) != n) {
    throw UsageError("cotangent point dimension mismatch");
  }
  std::vector<double> z(pt.base);
  z.insert(z.end(), pt.covector.begin(), pt.covector.end());
  const auto lifted = dual_lift_gradient(z);
  std::span<const Dual<double>> all(lifted);
  const auto v = source ? b.alpha(all.first(static_cast<std::size_t>(n)), all.last(static_cast<std::size_t>(n)))
                        : b.beta(all.first(static_cast<std::size_t>(n)), all.last(static_cast<std::size_t>(n)));
  Eigen::MatrixXd j(n, 2 * n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < 2 * n; ++c) j(r, c) = v[static_cast<std::size_t>(r)].derivative(static_cast<std::size_t>(c));
  }
  return j;
}

}  // namespace

Eigen::MatrixXd alpha_jacobian(const BiRealisation& b, const CotangentPoint& pt) { return jacobian(b, pt, true); }
Eigen::MatrixXd beta_jacobian(const BiRealisation& b, const CotangentPoint& pt) { return jacobian(b, pt, false); }

Eigen::Matrix3d hat(const Eigen::Vector3d& v) {
  Eigen::Matrix3d m;
  m << 0, -v.z(), v.y(), v.z(), 0, -v.x(), -v.y(), v.x(), 0;
  return m;
}

Eigen::Matrix3d cayley(const Eigen::Vector3d& p) {
  if (!(p.squaredNorm() < 4.0)) throw DomainError("Cayley map singular for |p| >= 2");
  const Eigen::Matrix3d h = hat(p) / 2.0;
  const Eigen::Matrix3d id = Eigen::Matrix3d::Identity();
  return (id + h) * (id - h).inverse();
}

}  // namespace pint
