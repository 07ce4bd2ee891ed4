#pragma once

#include <vector>

#include "warped/point.hpp"
#include "warped/scalars.hpp"

namespace warped {

// Dense square matrix indexed 0..n over the full tangent space R x R^n.
struct SquareMatrix {
  int dim = 0;
  std::vector<double> a;

  explicit SquareMatrix(int d = 0) : dim(d), a(static_cast<size_t>(d) * d, 0.0) {}
  double& at(int i, int j) { return a[static_cast<size_t>(i) * dim + j]; }
  double at(int i, int j) const { return a[static_cast<size_t>(i) * dim + j]; }
};

struct FundamentalTensor {
  SquareMatrix g;     // g_AB = half Hessian of F^2 in y
  SquareMatrix ginv;  // closed-form inverse
  double det = 0.0;   // numeric determinant of g (LU)
  double det_closed = 0.0;  // Omega^{n-1} Lambda / 2^{n+1}
  double omega = 0.0, lambda = 0.0;
};

// Assembles g and its closed-form inverse at the point. Requires strong
// convexity (Omega > 0 and Lambda > 0); throws ConvexityError otherwise.
FundamentalTensor fundamental_tensor(const DerivedScalars& S, const EvalPoint& p);

// F^2 = u^2 phi at the point.
double finsler_norm_squared(const DerivedScalars& S, const EvalPoint& p);

// Geodesic spray coefficients G^A, A = 0..n:
//   G^0 = u^2 s E,  G^i = u s H y^i - u^2 W x^i.
std::vector<double> spray(const DerivedScalars& S, const EvalPoint& p);

// Divergence sum_A dG^A/dy^A = u s (U_z + (n+1)(V + W) + V - 2 W).
double spray_divergence(const DerivedScalars& S, const EvalPoint& p);

// Trace-corrected spray: Ghat^A = G^A - y^A div / (n+2); equals
// (u^2 s R, u s T y^i - u^2 W x^i).
std::vector<double> spray_trace_corrected(const DerivedScalars& S, const EvalPoint& p);

}  // namespace warped
