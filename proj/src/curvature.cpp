#include "warped/curvature.hpp"

#include <array>
#include <cmath>
#include <sstream>

#include "warped/fd_util.hpp"

namespace warped {

namespace {

double sup_of(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::fmax(m, std::abs(x));
  return m;
}

double frob_of(const std::vector<double>& v) {
  double acc = 0.0;
  for (double x : v) acc += x * x;
  return std::sqrt(acc);
}

// Scalar derivative values feeding one rank-4 assembly. The same component
// formulas produce the Douglas tensor from (R, T, W) and the Berwald tensor
// from (E, H, W); only these numbers differ.
struct Rank4Ctx {
  int n = 0;
  double u = 0.0, s = 0.0, z = 0.0;
  const std::vector<double>* x = nullptr;  // xbar, 0-based
  const std::vector<double>* y = nullptr;  // ybar, 0-based
  double A0 = 0, A1 = 0, A2 = 0, A3 = 0;   // time-component scalar and z-derivatives
  double C1 = 0, C2 = 0, C3 = 0;           // fiber-component scalar z-derivatives
  double W1 = 0, W2 = 0, W3 = 0;           // W_z, W_zz, W_zzz
};

// One component with lower indices already split into the number of zeros and
// the spatial (1-based) remainder. Sorting is legitimate because the three
// lower slots are symmetric: they are repeated y-derivatives.
double component(const Rank4Ctx& c, int upper, const std::array<int, 3>& lower) {
  const double u = c.u, s = c.s, z = c.z;
  const auto& x = *c.x;
  const auto& y = *c.y;
  auto X = [&](int a) { return x[a - 1]; };
  auto Y = [&](int a) { return y[a - 1]; };
  auto D = [](int a, int b) { return a == b ? 1.0 : 0.0; };

  int zeros = 0;
  std::array<int, 3> sp{};
  int nsp = 0;
  for (int idx : lower) {
    if (idx == 0)
      ++zeros;
    else
      sp[nsp++] = idx;
  }

  if (upper == 0) {
    const double A0 = c.A0, A1 = c.A1, A2 = c.A2, A3 = c.A3;
    switch (zeros) {
      case 3:
        return s / u * A3;
      case 2: {
        const int l = sp[0];
        return A2 * X(l) / u - s / (u * u) * (A2 + z * A3) * Y(l);
      }
      case 1: {
        const int k = sp[0], l = sp[1];
        return s * z * (z * A3 + 3.0 * A2) * Y(k) * Y(l) / (u * u * u) -
               z * A2 * (X(k) * Y(l) + X(l) * Y(k)) / (u * u) - s * z * A2 * D(k, l) / u;
      }
      default: {
        const int j = sp[0], k = sp[1], l = sp[2];
        const double xyy = X(j) * Y(k) * Y(l) + X(k) * Y(l) * Y(j) + X(l) * Y(j) * Y(k);
        const double dx = D(j, k) * X(l) + D(k, l) * X(j) + D(l, j) * X(k);
        const double dy = D(j, k) * Y(l) + D(k, l) * Y(j) + D(l, j) * Y(k);
        return s / std::pow(u, 4) * (3.0 * A0 - 3.0 * z * A1 - 6.0 * z * z * A2 - z * z * z * A3) *
                   Y(j) * Y(k) * Y(l) +
               (-A0 + z * A1 + z * z * A2) * (xyy / std::pow(u, 3) + s / (u * u) * dy) +
               (A0 - z * A1) * dx / u;
      }
    }
  }

  const int i = upper;  // spatial upper index, 1-based
  const double C1 = c.C1, C2 = c.C2, C3 = c.C3;
  const double W1 = c.W1, W2 = c.W2, W3 = c.W3;
  switch (zeros) {
    case 3:
      return s / (u * u) * C3 * Y(i) - W3 * X(i) / u;
    case 2: {
      const int l = sp[0];
      return -s / std::pow(u, 3) * (2.0 * C2 + z * C3) * Y(i) * Y(l) +
             C2 * Y(i) * X(l) / (u * u) + z * W3 * Y(l) * X(i) / (u * u) +
             s / u * C2 * D(i, l);
    }
    case 1: {
      const int k = sp[0], l = sp[1];
      return s / std::pow(u, 4) * (3.0 * C1 + 5.0 * z * C2 + z * z * C3) * Y(i) * Y(k) * Y(l) -
             s / (u * u) * (C1 + z * C2) * (D(k, l) * Y(i) + D(i, k) * Y(l) + D(i, l) * Y(k)) -
             (C1 + z * C2) * (X(l) * Y(k) + X(k) * Y(l)) * Y(i) / std::pow(u, 3) +
             C1 * (X(l) * D(i, k) + X(k) * D(i, l)) / u +
             (W1 - z * W2 - z * z * W3) * X(i) * Y(k) * Y(l) / std::pow(u, 3) -
             (W1 - z * W2) * X(i) * D(k, l) / u;
    }
    default: {
      const int j = sp[0], k = sp[1], l = sp[2];
      const double xyy = X(j) * Y(k) * Y(l) + X(k) * Y(l) * Y(j) + X(l) * Y(j) * Y(k);
      const double dyy = D(i, j) * Y(k) * Y(l) + D(i, k) * Y(l) * Y(j) + D(i, l) * Y(j) * Y(k);
      const double ydjk = Y(l) * D(j, k) + Y(j) * D(k, l) + Y(k) * D(l, j);
      const double xdjk = X(j) * D(k, l) + X(k) * D(l, j) + X(l) * D(j, k);
      const double dd = D(i, j) * D(k, l) + D(i, k) * D(l, j) + D(i, l) * D(j, k);
      const double xdy = X(j) * D(i, k) * Y(l) + X(k) * D(i, l) * Y(j) + X(l) * D(i, j) * Y(k) +
                         X(k) * D(i, j) * Y(l) + X(l) * D(i, k) * Y(j) + X(j) * D(i, l) * Y(k);
      return -s / std::pow(u, 5) * (15.0 * z * C1 + 9.0 * z * z * C2 + z * z * z * C3) * Y(i) *
                 Y(j) * Y(k) * Y(l) +
             (3.0 * z * C1 + z * z * C2) *
                 (Y(i) * xyy / std::pow(u, 4) + s / std::pow(u, 3) * (dyy + Y(i) * ydjk)) -
             z * C1 * (Y(i) * xdjk / (u * u) + s / u * dd + xdy / (u * u)) -
             (3.0 * z * W1 - 3.0 * z * z * W2 - z * z * z * W3) * X(i) * Y(j) * Y(k) * Y(l) /
                 std::pow(u, 4) +
             z / (u * u) * (W1 - z * W2) * X(i) * ydjk;
    }
  }
}

Rank4 assemble_rank4(const DerivedScalars& S, const EvalPoint& p, const JetZR& a_scalar,
                     const JetZR& c_scalar) {
  if (S.n != p.n || S.z != p.z || S.r != p.r)
    throw InvalidPointError("rank-4 assembly: scalars and point disagree");
  Rank4 out(p.n, -1);
  Rank4Ctx ctx;
  ctx.n = p.n;
  ctx.u = p.u;
  ctx.s = p.s;
  ctx.z = p.z;
  ctx.x = &p.xbar;
  ctx.y = &p.ybar;
  ctx.A0 = a_scalar.d(0, 0);
  ctx.A1 = a_scalar.d(1, 0);
  ctx.A2 = a_scalar.d(2, 0);
  ctx.A3 = a_scalar.d(3, 0);
  ctx.C1 = c_scalar.d(1, 0);
  ctx.C2 = c_scalar.d(2, 0);
  ctx.C3 = c_scalar.d(3, 0);
  ctx.W1 = S.W.d(1, 0);
  ctx.W2 = S.W.d(2, 0);
  ctx.W3 = S.W.d(3, 0);

  for (int A = 0; A <= p.n; ++A)
    for (int B = 0; B <= p.n; ++B)
      for (int C = B; C <= p.n; ++C)
        for (int Dd = C; Dd <= p.n; ++Dd) {
          const double val = component(ctx, A, {B, C, Dd});
          out.at(A, B, C, Dd) = val;
          out.at(A, B, Dd, C) = val;
          out.at(A, C, B, Dd) = val;
          out.at(A, C, Dd, B) = val;
          out.at(A, Dd, B, C) = val;
          out.at(A, Dd, C, B) = val;
        }
  return out;
}

}  // namespace

double Rank4::sup_abs() const { return sup_of(v); }
double Rank4::frobenius() const { return frob_of(v); }
double Rank3::sup_abs() const { return sup_of(v); }
double Rank3::frobenius() const { return frob_of(v); }

double normalized_sup(const Rank4& t, const EvalPoint& p) {
  return t.sup_abs() * std::pow(p.u, -t.degree);
}

double normalized_sup(const Rank3& t, const EvalPoint& p) {
  return t.sup_abs() * std::pow(p.u, -t.degree);
}

Rank4 douglas_tensor(const DerivedScalars& S, const EvalPoint& p) {
  return assemble_rank4(S, p, S.R, S.T);
}

Rank4 berwald_tensor(const DerivedScalars& S, const EvalPoint& p) {
  return assemble_rank4(S, p, S.E, S.H);
}

Rank3 landsberg_tensor(const DerivedScalars& S, const EvalPoint& p) {
  if (S.n != p.n || S.z != p.z || S.r != p.r)
    throw InvalidPointError("landsberg_tensor: scalars and point disagree");
  const int n = p.n;
  const double u = p.u, s = p.s, z = p.z;
  const auto& x = p.xbar;
  const auto& y = p.ybar;
  auto X = [&](int a) { return x[a - 1]; };
  auto Y = [&](int a) { return y[a - 1]; };
  auto D = [](int a, int b) { return a == b ? 1.0 : 0.0; };

  const double pz = S.phi.d(1, 0);
  const double om = S.Omega.value();
  const double E0 = S.E.d(0, 0), E1 = S.E.d(1, 0), E2 = S.E.d(2, 0), E3 = S.E.d(3, 0);
  const double H1 = S.H.d(1, 0), H2 = S.H.d(2, 0), H3 = S.H.d(3, 0);
  const double W1 = S.W.d(1, 0), W2 = S.W.d(2, 0), W3 = S.W.d(3, 0);

  auto comp = [&](std::array<int, 3> lower) {
    int zeros = 0;
    std::array<int, 3> sp{};
    int nsp = 0;
    for (int idx : lower) {
      if (idx == 0)
        ++zeros;
      else
        sp[nsp++] = idx;
    }
    switch (zeros) {
      case 3:
        return -s / 4.0 * (pz * E3 + om * (H3 - W3));
      case 2: {
        const int l = sp[0];
        return -0.25 * (pz * E2 + om * H2) * X(l) +
               s / (4.0 * u) * (pz * (E2 + z * E3) + om * (H2 + z * H3 - z * W3)) * Y(l);
      }
      case 1: {
        const int k = sp[0], l = sp[1];
        return -s / (4.0 * u * u) *
                   (z * pz * (z * E3 + 3.0 * E2) + om * (H1 + 3.0 * z * H2 + z * z * H3) +
                    om * (W1 - z * W2 - z * z * W3)) *
                   Y(k) * Y(l) +
               z / (4.0 * u) * (pz * E2 + om * H2) * (X(k) * Y(l) + X(l) * Y(k)) +
               s / 4.0 * (z * pz * E2 + om * (H1 + z * H2 + W1 - z * W2)) * D(k, l);
      }
      default: {
        const int j = sp[0], k = sp[1], l = sp[2];
        const double xyy = X(j) * Y(k) * Y(l) + X(k) * Y(l) * Y(j) + X(l) * Y(j) * Y(k);
        const double ydjk = Y(l) * D(j, k) + Y(j) * D(k, l) + Y(k) * D(l, j);
        const double xdjk = X(l) * D(j, k) + X(j) * D(k, l) + X(k) * D(l, j);
        return -s / (4.0 * u * u * u) *
                   (pz * (3.0 * E0 - 3.0 * z * E1 - 6.0 * z * z * E2 - z * z * z * E3) -
                    om * (6.0 * z * H1 + 6.0 * z * z * H2 + z * z * z * H3) -
                    om * (3.0 * z * W1 - 3.0 * z * z * W2 - z * z * z * W3)) *
                   Y(j) * Y(k) * Y(l) -
               (pz * (-E0 + z * E1 + z * z * E2) + om * (z * H1 + z * z * H2)) * xyy /
                   (4.0 * u * u) -
               s / (4.0 * u) *
                   (pz * (-E0 + z * E1 + z * z * E2) +
                    om * (2.0 * z * H1 + z * z * H2 + z * W1 - z * z * W2)) *
                   ydjk -
               0.25 * (pz * (E0 - z * E1) - z * om * H1) * xdjk;
      }
    }
  };

  Rank3 out(n, 0);
  for (int A = 0; A <= n; ++A)
    for (int B = A; B <= n; ++B)
      for (int C = B; C <= n; ++C) {
        const double val = comp({A, B, C});
        out.at(A, B, C) = out.at(A, C, B) = val;
        out.at(B, A, C) = out.at(B, C, A) = val;
        out.at(C, A, B) = out.at(C, B, A) = val;
      }
  return out;
}

Rank3 landsberg_from_berwald(const DerivedScalars& S, const EvalPoint& p, const Rank4& berwald) {
  if (berwald.n != p.n) throw InvalidPointError("landsberg_from_berwald: dimension mismatch");
  const int n = p.n;
  // [F^2]_{y^0} = u phi_z and [F^2]_{y^i} = Omega y^i.
  const double w0 = p.u * S.phi.d(1, 0);
  const double om = S.Omega.value();
  Rank3 out(n, 0);
  for (int A = 0; A <= n; ++A)
    for (int B = 0; B <= n; ++B)
      for (int C = 0; C <= n; ++C) {
        double acc = w0 * berwald.at(0, A, B, C);
        for (int i = 1; i <= n; ++i) acc += om * p.ybar[i - 1] * berwald.at(i, A, B, C);
        out.at(A, B, C) = -0.25 * acc;
      }
  return out;
}

double OdeResiduals::max() const { return std::fmax(first, std::fmax(second, third)); }

OdeResiduals douglas_ode_residuals(const DerivedScalars& S) {
  OdeResiduals res;
  res.first = std::abs(S.R.d(0, 0) - S.z * S.R.d(1, 0));
  res.second = std::abs(S.T.d(1, 0));
  res.third = std::abs(S.W.d(1, 0) - S.z * S.W.d(2, 0));
  return res;
}

double RicciResiduals::max() const { return std::fmax(std::abs(P), std::abs(Q)); }

RicciResiduals ricci_flat_residuals(const DerivedScalars& S) {
  const int n = S.n;
  const double z = S.z, r = S.r;
  const double U0 = S.U.d(0, 0), U1 = S.U.d(1, 0), U2 = S.U.d(2, 0), Urz = S.U.d(1, 1);
  const double V0 = S.V.d(0, 0), V1 = S.V.d(1, 0), Vr = S.V.d(0, 1);
  const double W0 = S.W.d(0, 0), W1 = S.W.d(1, 0), Wr = S.W.d(0, 1);

  RicciResiduals res;
  res.P = (2.0 * r * r * W0 + 1.0) * (U1 + n * V0 + (n - 3) * W0) +
          2.0 * (n * W0 + r * Wr + r * r * W1 * (z * W0 - U0));
  res.Q = 2.0 * U0 * (U2 + n * V1 + (n - 2) * W1) - (Urz + n * Vr + (n - 3) * Wr) / r +
          n * V0 * (V0 + 2.0 * W0) + W0 * ((n - 5) * W0 + 2.0 * z * W1) + U1 * (2.0 * W0 - U1);
  return res;
}

double projective_flat_residual(const MetricFamily& fam, const EvalPoint& p,
                                const ProjFlatConfig& cfg) {
  const int n = p.n;
  double h = cfg.step_rel * std::fmax(p.r, 1.0);
  {
    const double floor = 1e-8 * std::fmax(p.r, 1.0);
    while (!(p.r - 2.0 * h >= fam.r_min() && p.r + 2.0 * h < fam.rho())) {
      h *= 0.5;
      if (h < floor)
        throw FDStepError("projective_flat_residual: no step fits inside the r domain");
    }
  }

  struct Vals {
    double F = 0.0;
    std::vector<double> Fy;
  };
  auto eval = [&](const std::vector<double>& xb) {
    double r2 = 0.0;
    for (double c : xb) r2 += c * c;
    const double r = std::sqrt(r2);
    const JetZR phi = fam.phi_jet(p.z, r, 1, 0);
    const double ph = phi.d(0, 0), pz = phi.d(1, 0);
    if (!(ph > 0.0)) {
      std::ostringstream os;
      os << "projective_flat_residual: profile nonpositive (" << ph << ") at r = " << r;
      throw DomainError(os.str());
    }
    const double root = std::sqrt(ph);
    Vals v;
    v.F = p.u * root;
    v.Fy.resize(static_cast<size_t>(n) + 1);
    v.Fy[0] = pz / (2.0 * root);
    const double om = 2.0 * ph - p.z * pz;
    for (int j = 0; j < n; ++j) v.Fy[j + 1] = p.ybar[j] / p.u * om / (2.0 * root);
    return v;
  };

  double worst = 0.0;
  for (int B = 0; B <= n; ++B) {
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
      const double di = richardson(
          [&](double hh) {
            std::vector<double> xp = p.xbar, xm = p.xbar;
            xp[i] += hh;
            xm[i] -= hh;
            return (eval(xp).Fy[B] - eval(xm).Fy[B]) / (2.0 * hh);
          },
          h, cfg.richardson_levels);
      acc += di * p.ybar[i];
    }
    double fb = 0.0;
    if (B >= 1) {
      const int i = B - 1;
      fb = richardson(
          [&](double hh) {
            std::vector<double> xp = p.xbar, xm = p.xbar;
            xp[i] += hh;
            xm[i] -= hh;
            return (eval(xp).F - eval(xm).F) / (2.0 * hh);
          },
          h, cfg.richardson_levels);
    }
    worst = std::fmax(worst, std::abs(acc - fb));
  }
  return worst;
}

}  // namespace warped
