#include "warped/tensor.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <sstream>

namespace warped {

namespace {

void require_match(const DerivedScalars& S, const EvalPoint& p, const char* op) {
  if (S.n != p.n || S.z != p.z || S.r != p.r) {
    std::ostringstream os;
    os << op << ": derived scalars were built for (n, z, r) = (" << S.n << ", " << S.z << ", "
       << S.r << ") but the point has (" << p.n << ", " << p.z << ", " << p.r << ")";
    throw InvalidPointError(os.str());
  }
}

}  // namespace

FundamentalTensor fundamental_tensor(const DerivedScalars& S, const EvalPoint& p) {
  require_match(S, p, "fundamental_tensor");
  const int n = p.n;
  const double u = p.u, z = p.z;

  const double omega = S.Omega.value();
  const double lambda = S.Lambda.value();
  if (!(omega > 0.0 && lambda > 0.0)) {
    std::ostringstream os;
    os << "strong convexity violated at z = " << z << ", r = " << p.r << ": Omega = " << omega
       << ", Lambda = " << lambda;
    throw ConvexityError(os.str());
  }

  const double phi_z = S.phi.d(1, 0);
  const double phi_zz = S.phi.d(2, 0);
  const double omega_z = S.Omega.d(1, 0);  // = phi_z - z phi_zz

  FundamentalTensor out;
  out.omega = omega;
  out.lambda = lambda;
  out.g = SquareMatrix(n + 1);
  out.ginv = SquareMatrix(n + 1);

  out.g.at(0, 0) = 0.5 * phi_zz;
  for (int i = 0; i < n; ++i) {
    const double yi = p.ybar[i];
    out.g.at(0, i + 1) = out.g.at(i + 1, 0) = 0.5 * omega_z * yi / u;
    for (int j = 0; j <= i; ++j) {
      const double yj = p.ybar[j];
      double v = -0.5 * z * omega_z * yi * yj / (u * u);
      if (i == j) v += 0.5 * omega;
      out.g.at(i + 1, j + 1) = out.g.at(j + 1, i + 1) = v;
    }
  }

  out.ginv.at(0, 0) = 2.0 * (omega - z * omega_z) / lambda;
  for (int i = 0; i < n; ++i) {
    const double yi = p.ybar[i];
    out.ginv.at(0, i + 1) = out.ginv.at(i + 1, 0) = -2.0 * omega_z * yi / (lambda * u);
    for (int j = 0; j <= i; ++j) {
      const double yj = p.ybar[j];
      double v = 2.0 * phi_z * omega_z * yi * yj / (omega * lambda * u * u);
      if (i == j) v += 2.0 / omega;
      out.ginv.at(i + 1, j + 1) = out.ginv.at(j + 1, i + 1) = v;
    }
  }

  Eigen::MatrixXd gm(n + 1, n + 1);
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j) gm(i, j) = out.g.at(i, j);
  out.det = gm.partialPivLu().determinant();
  out.det_closed = std::pow(omega, n - 1) * lambda / std::pow(2.0, n + 1);
  return out;
}

double finsler_norm_squared(const DerivedScalars& S, const EvalPoint& p) {
  require_match(S, p, "finsler_norm_squared");
  return p.u * p.u * S.phi.value();
}

std::vector<double> spray(const DerivedScalars& S, const EvalPoint& p) {
  require_match(S, p, "spray");
  const double u = p.u, s = p.s;
  std::vector<double> G(static_cast<size_t>(p.n) + 1);
  const double Ev = S.E.value();
  const double Hv = S.H.value();
  const double Wv = S.W.value();
  G[0] = u * u * s * Ev;
  for (int i = 0; i < p.n; ++i) G[i + 1] = u * s * Hv * p.ybar[i] - u * u * Wv * p.xbar[i];
  return G;
}

double spray_divergence(const DerivedScalars& S, const EvalPoint& p) {
  require_match(S, p, "spray_divergence");
  const double U_z = S.U.d(1, 0);
  const double Vv = S.V.value();
  const double Wv = S.W.value();
  return p.u * p.s * (U_z + (p.n + 1) * (Vv + Wv) + Vv - 2.0 * Wv);
}

std::vector<double> spray_trace_corrected(const DerivedScalars& S, const EvalPoint& p) {
  require_match(S, p, "spray_trace_corrected");
  const double u = p.u, s = p.s;
  std::vector<double> G(static_cast<size_t>(p.n) + 1);
  const double Rv = S.R.value();
  const double Tv = S.T.value();
  const double Wv = S.W.value();
  G[0] = u * u * s * Rv;
  for (int i = 0; i < p.n; ++i) G[i + 1] = u * s * Tv * p.ybar[i] - u * u * Wv * p.xbar[i];
  return G;
}

}  // namespace warped
