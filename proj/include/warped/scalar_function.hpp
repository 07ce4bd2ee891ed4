#pragma once

#include <memory>
#include <string>
#include <vector>

#include "warped/jet.hpp"

namespace warped {

// Highest raw derivative order any consumer may request from a profile
// function; composing into a (6,2) jet needs total order 8.
inline constexpr int kMaxDerivOrder = 8;

// A smooth function of one variable supplying raw derivatives up to
// kMaxDerivOrder. Profiles h, f, g, G of the metric families implement this.
class ScalarFunction1D {
 public:
  virtual ~ScalarFunction1D() = default;

  // [f(t), f'(t), ..., f^(order)(t)]; order <= kMaxDerivOrder.
  virtual std::vector<double> derivatives(double t, int order) const = 0;

  // Human-readable form for reports and error messages.
  virtual std::string describe() const = 0;

  double value(double t) const { return derivatives(t, 0)[0]; }

  Jet1D jet(double t, int order) const;
};

using FuncPtr = std::shared_ptr<const ScalarFunction1D>;

}  // namespace warped
