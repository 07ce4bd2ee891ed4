#include "warped/fd_oracle.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <functional>

#include "warped/fd_util.hpp"
#include "warped/scalars.hpp"

namespace warped {

namespace {

using VecFn = std::function<std::vector<double>(const std::vector<double>&)>;

// Richardson extrapolation applied per component of a vector estimator.
std::vector<double> richardson_vec(const std::function<std::vector<double>(double)>& D, double h,
                                   int levels) {
  if (levels < 1) levels = 1;
  std::vector<std::vector<double>> t(static_cast<size_t>(levels));
  for (int i = 0; i < levels; ++i) t[i] = D(h / static_cast<double>(1 << i));
  double pow4 = 4.0;
  for (int m = 1; m < levels; ++m) {
    for (int i = levels - 1; i >= m; --i)
      for (size_t c = 0; c < t[i].size(); ++c)
        t[i][c] = (pow4 * t[i][c] - t[i - 1][c]) / (pow4 - 1.0);
    pow4 *= 4.0;
  }
  return t[levels - 1];
}

std::vector<double> shifted(std::vector<double> w, int a, double da, int b = -1, double db = 0.0,
                            int c = -1, double dc = 0.0) {
  w[a] += da;
  if (b >= 0) w[b] += db;
  if (c >= 0) w[c] += dc;
  return w;
}

void axpy(std::vector<double>& acc, double coef, const std::vector<double>& v) {
  for (size_t i = 0; i < acc.size(); ++i) acc[i] += coef * v[i];
}

// Third derivative of a vector function along coordinates (a, b, c) at w,
// O(h^2) accurate; Richardson is applied by the caller.
std::vector<double> third_diff(const VecFn& f, const std::vector<double>& w, int a, int b, int c,
                               double h) {
  std::vector<double> acc(f(w).size(), 0.0);
  if (a == b && b == c) {
    axpy(acc, 1.0, f(shifted(w, a, 2 * h)));
    axpy(acc, -2.0, f(shifted(w, a, h)));
    axpy(acc, 2.0, f(shifted(w, a, -h)));
    axpy(acc, -1.0, f(shifted(w, a, -2 * h)));
    for (double& v : acc) v /= 2.0 * h * h * h;
    return acc;
  }
  // Normalize so a repeated pair, if any, sits in (a, b).
  if (a == c) std::swap(b, c);
  if (b == c) std::swap(a, c);
  if (a == b) {
    // d^2/da^2 of the central difference along c.
    axpy(acc, 1.0, f(shifted(w, a, h, c, h)));
    axpy(acc, -1.0, f(shifted(w, a, h, c, -h)));
    axpy(acc, -2.0, f(shifted(w, c, h)));
    axpy(acc, 2.0, f(shifted(w, c, -h)));
    axpy(acc, 1.0, f(shifted(w, a, -h, c, h)));
    axpy(acc, -1.0, f(shifted(w, a, -h, c, -h)));
    for (double& v : acc) v /= 2.0 * h * h * h;
    return acc;
  }
  // All distinct: central difference along a of the 4-point mixed rule in (b, c).
  for (int sa : {+1, -1})
    for (int sb : {+1, -1})
      for (int sc : {+1, -1})
        axpy(acc, sa * sb * sc, f(shifted(w, a, sa * h, b, sb * h, c, sc * h)));
  for (double& v : acc) v /= 8.0 * h * h * h;
  return acc;
}

// Closed-form spray as a function of the stacked y-vector (y0, ybar), with
// the base point fixed; optionally trace-corrected.
VecFn spray_of_y(const MetricFamily& fam, const EvalPoint& p, bool trace_corrected) {
  return [&fam, p, trace_corrected](const std::vector<double>& w) {
    std::vector<double> yb(w.begin() + 1, w.end());
    EvalPoint q = make_point(p.n, p.x0, p.xbar, w[0], std::move(yb));
    const DerivedScalars S = derived_scalars(fam, q.z, q.r, q.n);
    if (!trace_corrected) return spray(S, q);
    return spray_trace_corrected(S, q);
  };
}

Rank4 third_y_tensor(const MetricFamily& fam, const EvalPoint& p, const FDConfig& cfg,
                     bool trace_corrected) {
  const VecFn f = spray_of_y(fam, p, trace_corrected);
  std::vector<double> w(static_cast<size_t>(p.n) + 1);
  w[0] = p.y0;
  for (int i = 0; i < p.n; ++i) w[i + 1] = p.ybar[i];
  const double h = cfg.step_y3_rel * p.u;

  Rank4 out(p.n, -1);
  for (int B = 0; B <= p.n; ++B)
    for (int C = B; C <= p.n; ++C)
      for (int Dd = C; Dd <= p.n; ++Dd) {
        const std::vector<double> d = richardson_vec(
            [&](double hh) { return third_diff(f, w, B, C, Dd, hh); }, h,
            cfg.richardson_levels);
        for (int A = 0; A <= p.n; ++A) {
          out.at(A, B, C, Dd) = d[A];
          out.at(A, B, Dd, C) = d[A];
          out.at(A, C, B, Dd) = d[A];
          out.at(A, C, Dd, B) = d[A];
          out.at(A, Dd, B, C) = d[A];
          out.at(A, Dd, C, B) = d[A];
        }
      }
  return out;
}

double fit_x_step(const MetricFamily& fam, double r, double step_rel) {
  double h = step_rel * std::fmax(r, 1.0);
  // Halving below this width would only feed rounding noise into the stencil,
  // so points essentially on the domain boundary are rejected instead.
  const double floor = 1e-8 * std::fmax(r, 1.0);
  while (!(r - 2.0 * h >= fam.r_min() && r + 2.0 * h < fam.rho())) {
    h *= 0.5;
    if (h < floor) throw FDStepError("x-derivative stencil does not fit inside the r domain");
  }
  return h;
}

}  // namespace

SquareMatrix hessian_fd(const MetricFamily& fam, const EvalPoint& p, const FDConfig& cfg) {
  const int n = p.n;
  auto f2 = [&](const std::vector<double>& w) {
    double u2 = 0.0;
    for (int i = 1; i <= n; ++i) u2 += w[i] * w[i];
    const double u = std::sqrt(u2);
    return u2 * fam.phi_value(w[0] / u, p.r);
  };
  std::vector<double> w(static_cast<size_t>(n) + 1);
  w[0] = p.y0;
  for (int i = 0; i < n; ++i) w[i + 1] = p.ybar[i];
  const double h = cfg.step_y_rel * p.u;

  SquareMatrix g(n + 1);
  for (int a = 0; a <= n; ++a) {
    g.at(a, a) = 0.5 * richardson(
                           [&](double hh) {
                             return (f2(shifted(w, a, hh)) - 2.0 * f2(w) + f2(shifted(w, a, -hh))) /
                                    (hh * hh);
                           },
                           h, cfg.richardson_levels);
    for (int b = 0; b < a; ++b) {
      const double v = 0.5 * richardson(
                                 [&](double hh) {
                                   return (f2(shifted(w, a, hh, b, hh)) -
                                           f2(shifted(w, a, hh, b, -hh)) -
                                           f2(shifted(w, a, -hh, b, hh)) +
                                           f2(shifted(w, a, -hh, b, -hh))) /
                                          (4.0 * hh * hh);
                                 },
                                 h, cfg.richardson_levels);
      g.at(a, b) = g.at(b, a) = v;
    }
  }
  return g;
}

std::vector<double> spray_fd(const MetricFamily& fam, const EvalPoint& p, const FDConfig& cfg) {
  const int n = p.n;
  // F^2 as a function of base coordinates and y jointly, all plain doubles.
  auto f2 = [&](const std::vector<double>& xb, const std::vector<double>& w) {
    double u2 = 0.0, r2 = 0.0;
    for (int i = 0; i < n; ++i) r2 += xb[i] * xb[i];
    for (int i = 1; i <= n; ++i) u2 += w[i] * w[i];
    const double u = std::sqrt(u2);
    return u2 * fam.phi_value(w[0] / u, std::sqrt(r2));
  };
  std::vector<double> w(static_cast<size_t>(n) + 1);
  w[0] = p.y0;
  for (int i = 0; i < n; ++i) w[i + 1] = p.ybar[i];
  const double hy = cfg.step_y_rel * p.u;
  const double hx = fit_x_step(fam, p.r, cfg.step_x_rel);

  // t_B = sum_c [F^2]_{y^B x^c} ybar_c - [F^2]_{x^B}; x^0 derivatives vanish.
  std::vector<double> t(static_cast<size_t>(n) + 1, 0.0);
  for (int B = 0; B <= n; ++B) {
    double acc = 0.0;
    for (int c = 0; c < n; ++c) {
      const double mixed = richardson(
          [&](double hh) {
            const double sy = hh;              // scale both steps together
            const double sx = hh * hx / hy;    // so the pair halves in lockstep
            auto xp = p.xbar, xm = p.xbar;
            xp[c] += sx;
            xm[c] -= sx;
            return (f2(xp, shifted(w, B, sy)) - f2(xp, shifted(w, B, -sy)) -
                    f2(xm, shifted(w, B, sy)) + f2(xm, shifted(w, B, -sy))) /
                   (4.0 * sy * sx);
          },
          hy, cfg.richardson_levels);
      acc += mixed * p.ybar[c];
    }
    double fx = 0.0;
    if (B >= 1) {
      const int c = B - 1;
      fx = richardson(
          [&](double hh) {
            auto xp = p.xbar, xm = p.xbar;
            xp[c] += hh;
            xm[c] -= hh;
            return (f2(xp, w) - f2(xm, w)) / (2.0 * hh);
          },
          hx, cfg.richardson_levels);
    }
    t[B] = acc - fx;
  }

  const SquareMatrix g = hessian_fd(fam, p, cfg);
  Eigen::MatrixXd gm(n + 1, n + 1);
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j) gm(i, j) = g.at(i, j);
  const Eigen::MatrixXd ginv = gm.inverse();

  std::vector<double> G(static_cast<size_t>(n) + 1, 0.0);
  for (int A = 0; A <= n; ++A) {
    double acc = 0.0;
    for (int B = 0; B <= n; ++B) acc += ginv(A, B) * t[B];
    G[A] = 0.25 * acc;
  }
  return G;
}

Rank4 berwald_fd(const MetricFamily& fam, const EvalPoint& p, const FDConfig& cfg) {
  return third_y_tensor(fam, p, cfg, false);
}

Rank4 douglas_fd(const MetricFamily& fam, const EvalPoint& p, const FDConfig& cfg) {
  return third_y_tensor(fam, p, cfg, true);
}

double ricci_fd(const MetricFamily& fam, const EvalPoint& p, const FDConfig& cfg) {
  const int n = p.n;
  auto sprayfn = [&](const std::vector<double>& xb,
                     const std::vector<double>& w) -> std::vector<double> {
    std::vector<double> yb(w.begin() + 1, w.end());
    EvalPoint q = make_point(n, p.x0, xb, w[0], std::move(yb));
    const DerivedScalars S = derived_scalars(fam, q.z, q.r, q.n);
    return spray(S, q);
  };
  std::vector<double> w(static_cast<size_t>(n) + 1);
  w[0] = p.y0;
  for (int i = 0; i < n; ++i) w[i + 1] = p.ybar[i];
  const double hy = cfg.step_y_rel * p.u;
  const double hx = fit_x_step(fam, p.r, cfg.step_x_rel);
  const int L = cfg.richardson_levels;

  const std::vector<double> G0 = sprayfn(p.xbar, w);

  // term1 = 2 sum_A dG^A/dx^A (the x^0 derivative vanishes identically).
  double term1 = 0.0;
  for (int a = 0; a < n; ++a) {
    const std::vector<double> d = richardson_vec(
        [&](double hh) {
          auto xp = p.xbar, xm = p.xbar;
          xp[a] += hh;
          xm[a] -= hh;
          std::vector<double> out = sprayfn(xp, w);
          const std::vector<double> lo = sprayfn(xm, w);
          for (size_t i = 0; i < out.size(); ++i) out[i] = (out[i] - lo[i]) / (2.0 * hh);
          return out;
        },
        hx, L);
    term1 += 2.0 * d[a + 1];
  }

  // term2 = - sum_{c,B} ybar_c d2G^B/dx^c dy^B.
  double term2 = 0.0;
  for (int c = 0; c < n; ++c) {
    for (int B = 0; B <= n; ++B) {
      const std::vector<double> d = richardson_vec(
          [&](double hh) {
            const double sy = hh;
            const double sx = hh * hx / hy;
            auto xp = p.xbar, xm = p.xbar;
            xp[c] += sx;
            xm[c] -= sx;
            std::vector<double> out = sprayfn(xp, shifted(w, B, sy));
            const std::vector<double> t2 = sprayfn(xp, shifted(w, B, -sy));
            const std::vector<double> t3 = sprayfn(xm, shifted(w, B, sy));
            const std::vector<double> t4 = sprayfn(xm, shifted(w, B, -sy));
            for (size_t i = 0; i < out.size(); ++i)
              out[i] = (out[i] - t2[i] - t3[i] + t4[i]) / (4.0 * sy * sx);
            return out;
          },
          hy, L);
      term2 -= p.ybar[c] * d[B];
    }
  }

  // Second y-derivatives, full matrix of vectors.
  std::vector<std::vector<std::vector<double>>> H2(
      static_cast<size_t>(n) + 1,
      std::vector<std::vector<double>>(static_cast<size_t>(n) + 1));
  for (int a = 0; a <= n; ++a)
    for (int b = a; b <= n; ++b) {
      std::vector<double> d;
      if (a == b) {
        d = richardson_vec(
            [&](double hh) {
              std::vector<double> out = sprayfn(p.xbar, shifted(w, a, hh));
              const std::vector<double> lo = sprayfn(p.xbar, shifted(w, a, -hh));
              for (size_t i = 0; i < out.size(); ++i)
                out[i] = (out[i] - 2.0 * G0[i] + lo[i]) / (hh * hh);
              return out;
            },
            hy, L);
      } else {
        d = richardson_vec(
            [&](double hh) {
              std::vector<double> out = sprayfn(p.xbar, shifted(w, a, hh, b, hh));
              const std::vector<double> t2 = sprayfn(p.xbar, shifted(w, a, hh, b, -hh));
              const std::vector<double> t3 = sprayfn(p.xbar, shifted(w, a, -hh, b, hh));
              const std::vector<double> t4 = sprayfn(p.xbar, shifted(w, a, -hh, b, -hh));
              for (size_t i = 0; i < out.size(); ++i)
                out[i] = (out[i] - t2[i] - t3[i] + t4[i]) / (4.0 * hh * hh);
              return out;
            },
            hy, L);
      }
      H2[a][b] = d;
      H2[b][a] = std::move(d);
    }

  double term3 = 0.0;
  for (int c = 0; c <= n; ++c)
    for (int A = 0; A <= n; ++A) term3 += 2.0 * G0[c] * H2[c][A][A];

  // First y-derivatives.
  std::vector<std::vector<double>> J(static_cast<size_t>(n) + 1);
  for (int c = 0; c <= n; ++c) {
    J[c] = richardson_vec(
        [&](double hh) {
          std::vector<double> out = sprayfn(p.xbar, shifted(w, c, hh));
          const std::vector<double> lo = sprayfn(p.xbar, shifted(w, c, -hh));
          for (size_t i = 0; i < out.size(); ++i) out[i] = (out[i] - lo[i]) / (2.0 * hh);
          return out;
        },
        hy, L);
  }
  double term4 = 0.0;
  for (int c = 0; c <= n; ++c)
    for (int A = 0; A <= n; ++A) term4 -= J[c][A] * J[A][c];

  return term1 + term2 + term3 + term4;
}

}  // namespace warped
