#pragma once

#include "warped/curvature.hpp"
#include "warped/families.hpp"
#include "warped/point.hpp"
#include "warped/tensor.hpp"

namespace warped {

// Step sizes are relative (y steps to u, x steps to max(r, 1)). Third
// y-derivatives need a much larger step than first/second ones: their
// rounding noise grows like h^-3, so the optimum sits near 1e-2 with
// Richardson extrapolation soaking up the truncation error.
struct FDConfig {
  double step_y_rel = 1e-3;
  double step_x_rel = 1e-3;
  double step_y3_rel = 2e-2;
  int richardson_levels = 2;
};

// Half Hessian of F^2 in y by central differences on the plain-double
// evaluation path; shares no derivative code with the jet pipeline.
SquareMatrix hessian_fd(const MetricFamily& fam, const EvalPoint& p, const FDConfig& cfg = {});

// Spray coefficients assembled from finite differences of F^2 alone:
// G^A = 1/4 g_fd^{AB} (sum_C [F^2]_{y^B x^C} y^C - [F^2]_{x^B}), with g_fd
// the numerically inverted FD Hessian.
std::vector<double> spray_fd(const MetricFamily& fam, const EvalPoint& p,
                             const FDConfig& cfg = {});

// Third y-derivatives of the closed-form spray (resp. trace-corrected spray),
// cross-checking the assembled Berwald (resp. Douglas) components.
Rank4 berwald_fd(const MetricFamily& fam, const EvalPoint& p, const FDConfig& cfg = {});
Rank4 douglas_fd(const MetricFamily& fam, const EvalPoint& p, const FDConfig& cfg = {});

// Ricci scalar by differencing the closed-form spray:
// Ric = 2 dG^A/dx^A - y^C d2G^A/dx^C dy^A + 2 G^C d2G^A/dy^C dy^A
//       - dG^A/dy^C dG^C/dy^A   (summed over repeated indices).
double ricci_fd(const MetricFamily& fam, const EvalPoint& p, const FDConfig& cfg = {});

}  // namespace warped
