#pragma once

#include <vector>

#include "warped/errors.hpp"

namespace warped {

// A base point x = (x0, xbar) and tangent vector y = (y0, ybar) on R x R^n,
// with the derived invariants used everywhere:
//   r = |xbar|, u = |ybar|, z = y0/u, s = <xbar, ybar>/u.
struct EvalPoint {
  int n = 0;
  double x0 = 0.0;
  std::vector<double> xbar;
  double y0 = 0.0;
  std::vector<double> ybar;

  double r = 0.0;
  double u = 0.0;
  double z = 0.0;
  double s = 0.0;
};

// Validates shapes and |ybar| > 0, then fills in the invariants.
// Requires n >= 2.
EvalPoint make_point(int n, double x0, std::vector<double> xbar, double y0,
                     std::vector<double> ybar);

// Same point with y scaled by lambda > 0 (z, s are unchanged, u scales).
EvalPoint scale_y(const EvalPoint& p, double lambda);

}  // namespace warped
