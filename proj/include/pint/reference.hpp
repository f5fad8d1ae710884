// High-accuracy reference integration (adaptive Runge-Kutta-Fehlberg 7(8)).
#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

namespace pint {

class ReferenceSolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// rhs(t, x, dxdt)
using VectorField = std::function<void(double, const std::vector<double>&, std::vector<double>&)>;

struct ReferenceTolerance {
  double abs = 1e-14;
  double rel = 1e-14;
};

/// Integrates x' = rhs(t, x) from t0 to t1.
std::vector<double> integrate_reference(const VectorField& rhs, std::vector<double> x0, double t0, double t1,
                                        ReferenceTolerance tol = {});

}  // namespace pint
