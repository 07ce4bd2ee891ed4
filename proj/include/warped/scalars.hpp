#pragma once

#include "warped/families.hpp"
#include "warped/jet.hpp"

namespace warped {

// Jets of every scalar the tensor formulas consume, all expanded at the same
// (z, r). Orders decay through the pipeline; the ones reaching the rank-4
// assembly still carry three z-derivatives, which is exactly what it needs.
//
//   Omega  = 2 phi - z phi_z
//   Lambda = 2 phi phi_zz - phi_z^2
//   U = (2 phi phi_zr - phi_z phi_r) / (2 r Lambda)
//   V = (phi_r phi_zz - phi_z phi_zr) / (2 r Lambda)
//   W = phi_r / (2 r Omega)
//   E = U + z V          (geodesic coefficient scalar, time component)
//   H = V + W            (geodesic coefficient scalar, fiber component)
//   R = U - z (U_z + (n-1) W) / (n+2)    (trace-corrected E)
//   T = (3 W - U_z) / (n+2)              (trace-corrected H)
struct DerivedScalars {
  int n = 0;
  double z = 0.0, r = 0.0;
  JetZR phi, Omega, Lambda, U, V, W, E, H, R, T;
};

// Tolerance below which Omega or Lambda counts as vanishing and the metric as
// degenerate at the point.
inline constexpr double kDegenerateEps = 1e-12;

DerivedScalars derived_scalars(const MetricFamily& fam, double z, double r, int n,
                               bool enforce_convexity = true);

}  // namespace warped
