#include "pint/reference.hpp"

#include <boost/numeric/odeint.hpp>
#include <cmath>

namespace pint {

std::vector<double> integrate_reference(const VectorField& rhs, std::vector<double> x0, double t0, double t1,
                                        ReferenceTolerance tol) {
  namespace odeint = boost::numeric::odeint;
  if (t0 == t1) return x0;
  using Stepper = odeint::runge_kutta_fehlberg78<std::vector<double>>;
  auto stepper = odeint::make_controlled<Stepper>(tol.abs, tol.rel);
  const double span = t1 - t0;
  try {
    odeint::integrate_adaptive(
        stepper, [&](const std::vector<double>& x, std::vector<double>& dxdt, double t) { rhs(t, x, dxdt); }, x0, t0,
        t1, span / 64.0);
  } catch (const odeint::step_adjustment_error& e) {
    throw ReferenceSolverError(std::string("reference ODE solver failed: ") + e.what());
  }
  for (double v : x0) {
    if (!std::isfinite(v)) throw ReferenceSolverError("reference ODE solution is not finite");
  }
  return x0;
}

}  // namespace pint
