#include "warped/scalars.hpp"

#include <cmath>
#include <sstream>

namespace warped {

DerivedScalars derived_scalars(const MetricFamily& fam, double z, double r, int n,
                               bool enforce_convexity) {
  if (n < 2) throw InvalidPointError("derived_scalars: fiber dimension n must be at least 2");
  DerivedScalars S;
  S.n = n;
  S.z = z;
  S.r = r;

  S.phi = fam.phi_jet(z, r, kDefaultZOrder, kDefaultROrder, enforce_convexity);
  const JetZR zj = jet_var_z(kDefaultZOrder, kDefaultROrder, z, r);
  const JetZR rj = jet_var_r(kDefaultZOrder, kDefaultROrder, z, r);

  const JetZR phi_z = jet_dz(S.phi);
  const JetZR phi_zz = jet_dz(phi_z);
  const JetZR phi_r = jet_dr(S.phi);
  const JetZR phi_zr = jet_dz(phi_r);

  S.Omega = 2.0 * S.phi - zj * phi_z;
  S.Lambda = 2.0 * S.phi * phi_zz - phi_z * phi_z;

  const double omega = S.Omega.value();
  const double lambda = S.Lambda.value();
  if (std::abs(omega) < kDegenerateEps || std::abs(lambda) < kDegenerateEps) {
    std::ostringstream os;
    os << "metric degenerate at z = " << z << ", r = " << r << ": Omega = " << omega
       << ", Lambda = " << lambda;
    throw DegenerateMetricError(os.str());
  }

  const JetZR den = 2.0 * rj * S.Lambda;
  S.U = (2.0 * S.phi * phi_zr - phi_z * phi_r) / den;
  S.V = (phi_r * phi_zz - phi_z * phi_zr) / den;
  S.W = phi_r / (2.0 * rj * S.Omega);

  const JetZR U_z = jet_dz(S.U);
  S.E = S.U + zj * S.V;
  S.H = S.V + S.W;
  S.R = S.U - (1.0 / (n + 2)) * (zj * (U_z + double(n - 1) * S.W));
  S.T = (1.0 / (n + 2)) * (3.0 * S.W - U_z);
  return S;
}

}  // namespace warped
