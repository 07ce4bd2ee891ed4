#pragma once

#include <functional>

#include "warped/scalar_function.hpp"

namespace warped {

// Composite 16-point Gauss-Legendre integral of f over [a, b], doubling the
// panel count until successive estimates differ by less than 1e-12 (with a
// relative guard for large magnitudes). Throws QuadratureError if the panel
// cap is reached without convergence.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b);

// Convex profile built from a positive kernel k and an offset c:
//   G(t) = integral_0^t (t - tau) k(tau) dtau + c
// so G'' = k exactly and G' (t) = integral_0^t k. Derivatives of order >= 2
// delegate to the kernel; orders 0 and 1 are evaluated by quadrature.
class KernelProfile final : public ScalarFunction1D {
 public:
  KernelProfile(FuncPtr kernel, double c);

  std::vector<double> derivatives(double t, int order) const override;
  std::string describe() const override;

  double offset() const { return c_; }

 private:
  FuncPtr kernel_;
  double c_;
};

}  // namespace warped
