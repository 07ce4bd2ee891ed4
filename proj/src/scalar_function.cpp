#include "warped/scalar_function.hpp"

namespace warped {

Jet1D ScalarFunction1D::jet(double t, int order) const {
  const std::vector<double> d = derivatives(t, order);
  Jet1D j(order, t);
  double fact = 1.0;
  for (int k = 0; k <= order; ++k) {
    if (k > 1) fact *= k;
    j.coeff(k) = d[k] / fact;
  }
  return j;
}

}  // namespace warped
