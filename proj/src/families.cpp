#include "warped/families.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <memory>
#include <sstream>
#include <utility>

#include "warped/expr.hpp"
#include "warped/quadrature.hpp"
#include "warped/rng.hpp"

namespace warped {

namespace {

// Embed a univariate jet in r as a bivariate jet: z-partials are exactly zero.
JetZR lift_r(const Jet1D& f, int zorder, int rorder, double z0, double r0) {
  JetZR out(zorder, rorder, z0, r0);
  for (int j = 0; j <= rorder; ++j) out.d(0, j) = f.deriv(j);
  return out;
}

JetZR lift_z(const Jet1D& f, int zorder, int rorder, double z0, double r0) {
  JetZR out(zorder, rorder, z0, r0);
  for (int i = 0; i <= zorder; ++i) out.d(i, 0) = f.deriv(i);
  return out;
}

double positive_or_throw(double v, const char* what, const std::string& fn, double r) {
  if (!(v > 0.0)) {
    std::ostringstream os;
    os << what << " " << fn << " must be positive; got " << v << " at r = " << r;
    throw DomainError(os.str());
  }
  return v;
}

}  // namespace

void MetricFamily::set_r_min(double v) {
  if (!(v > 0.0) || !(v < rho_)) throw DomainError("set_r_min: need 0 < r_min < rho");
  r_min_ = v;
}

void MetricFamily::check_r(double r) const {
  if (!(r >= r_min_) || !(r < rho_)) {
    std::ostringstream os;
    os << "r = " << r << " outside the domain [" << r_min_ << ", " << rho_ << ") of family "
       << name_;
    throw DomainError(os.str());
  }
}

JetZR MetricFamily::phi_jet(double z, double r, int zorder, int rorder,
                            bool enforce_convexity) const {
  check_r(r);
  JetZR out = jet_fn_(z, r, zorder, rorder);
  if (enforce_convexity && convexity_fn_) {
    if (auto msg = convexity_fn_(z, r)) throw ConvexityError(*msg);
  }
  return out;
}

double MetricFamily::phi_value(double z, double r) const {
  check_r(r);
  return value_fn_(z, r);
}

double MetricFamily::finsler_value(double z, double r, double u) const {
  const double phi = phi_value(z, r);
  if (!(phi > 0.0)) {
    std::ostringstream os;
    os << "profile nonpositive (" << phi << ") at z = " << z << ", r = " << r << " in family "
       << name_;
    throw DomainError(os.str());
  }
  return u * std::sqrt(phi);
}

MetricFamily MetricFamily::g_family(FuncPtr h, FuncPtr G, double rho) {
  if (!h || !G) throw DomainError("g_family: null profile");
  if (!(rho > 0.0)) throw DomainError("g_family: rho must be positive");
  MetricFamily fam;
  fam.kind_ = FamilyKind::GFamily;
  fam.name_ = "g-family";
  fam.description_ = "phi = G(h(r) z)^2 / h(r)^2, h = " + h->describe() + ", G = " + G->describe();
  fam.rho_ = rho;
  fam.r_min_ = 0.05 * rho;
  fam.jet_fn_ = [h, G](double z, double r, int zo, int ro) {
    const Jet1D h1 = h->jet(r, ro);
    positive_or_throw(h1.value(), "warp profile", h->describe(), r);
    const JetZR hj = lift_r(h1, zo, ro, z, r);
    const JetZR t = jet_mul(hj, jet_var_z(zo, ro, z, r));
    const JetZR Gj = jet_compose_univariate(G->derivatives(t.value(), zo + ro), t);
    return jet_div(jet_mul(Gj, Gj), jet_mul(hj, hj));
  };
  fam.value_fn_ = [h, G](double z, double r) {
    const double hv = positive_or_throw(h->value(r), "warp profile", h->describe(), r);
    const double Gv = G->value(hv * z);
    return Gv * Gv / (hv * hv);
  };
  fam.convexity_fn_ = [h, G](double z, double r) -> std::optional<std::string> {
    const double hv = h->value(r);
    if (!(hv > 0.0)) return std::nullopt;  // reported as a domain error elsewhere
    const double t = hv * z;
    const std::vector<double> d = G->derivatives(t, 2);
    std::ostringstream os;
    if (!(d[0] > 0.0))
      os << "G(t) = " << d[0] << " <= 0 at t = " << t;
    else if (!(d[0] - t * d[1] > 0.0))
      os << "G(t) - t G'(t) = " << d[0] - t * d[1] << " <= 0 at t = " << t;
    else if (!(d[2] > 0.0))
      os << "G''(t) = " << d[2] << " <= 0 at t = " << t;
    else
      return std::nullopt;
    return os.str();
  };
  return fam;
}

MetricFamily MetricFamily::flat(FuncPtr G, double rho) {
  MetricFamily fam = g_family(constant_function(1.0), G, rho);
  fam.kind_ = FamilyKind::Flat;
  fam.name_ = "flat";
  fam.description_ = "phi = G(z)^2, G = " + G->describe();
  return fam;
}

MetricFamily MetricFamily::randers(FuncPtr f, FuncPtr g, double b, double rho) {
  if (!f || !g) throw DomainError("randers: null profile");
  if (!(rho > 0.0)) throw DomainError("randers: rho must be positive");
  if (b < 0.0) throw DomainError("randers: drift b must be nonnegative");
  MetricFamily fam;
  fam.kind_ = FamilyKind::Randers;
  fam.name_ = "randers";
  {
    std::ostringstream os;
    os << "phi = (f(r) sqrt(g(r) z^2 + 1) + b z)^2, f = " << f->describe()
       << ", g = " << g->describe() << ", b = " << b;
    fam.description_ = os.str();
  }
  fam.rho_ = rho;
  fam.r_min_ = 0.05 * rho;
  fam.jet_fn_ = [f, g, b](double z, double r, int zo, int ro) {
    const Jet1D f1 = f->jet(r, ro);
    const Jet1D g1 = g->jet(r, ro);
    positive_or_throw(f1.value(), "profile", f->describe(), r);
    positive_or_throw(g1.value(), "profile", g->describe(), r);
    const JetZR fj = lift_r(f1, zo, ro, z, r);
    const JetZR gj = lift_r(g1, zo, ro, z, r);
    const JetZR zj = jet_var_z(zo, ro, z, r);
    const JetZR base = jet_add(jet_mul(fj, jet_sqrt(jet_mul(gj, jet_mul(zj, zj)) + 1.0)),
                               jet_scale(zj, b));
    return jet_mul(base, base);
  };
  fam.value_fn_ = [f, g, b](double z, double r) {
    const double fv = positive_or_throw(f->value(r), "profile", f->describe(), r);
    const double gv = positive_or_throw(g->value(r), "profile", g->describe(), r);
    const double base = fv * std::sqrt(gv * z * z + 1.0) + b * z;
    return base * base;
  };
  fam.convexity_fn_ = [f, g, b](double, double r) -> std::optional<std::string> {
    const double fv = f->value(r);
    const double gv = g->value(r);
    if (!(fv > 0.0) || !(gv > 0.0)) return std::nullopt;  // domain error elsewhere
    if (b * b < fv * fv * gv) return std::nullopt;
    std::ostringstream os;
    os << "drift bound violated at r = " << r << ": b^2 = " << b * b
       << " >= f(r)^2 g(r) = " << fv * fv * gv;
    return os.str();
  };
  return fam;
}

MetricFamily MetricFamily::kernel_family(FuncPtr kernel, double c, FuncPtr g, double rho) {
  auto G = std::make_shared<KernelProfile>(std::move(kernel), c);
  MetricFamily fam = g_family(g, G, rho);
  fam.kind_ = FamilyKind::KernelFamily;
  fam.name_ = "kernel-family";
  return fam;
}

MetricFamily MetricFamily::custom(const std::string& name, FuncPtr P1, FuncPtr Q1, FuncPtr P2,
                                  FuncPtr Q2, double rho) {
  if (!P1 || !Q1 || !P2 || !Q2) throw DomainError("custom: null profile");
  if (!(rho > 0.0)) throw DomainError("custom: rho must be positive");
  MetricFamily fam;
  fam.kind_ = FamilyKind::Custom;
  fam.name_ = name;
  fam.description_ = "phi = (" + P1->describe() + ")(" + Q1->describe() + ") + (" +
                     P2->describe() + ")(" + Q2->describe() + ")";
  fam.rho_ = rho;
  fam.r_min_ = 0.05 * rho;
  fam.jet_fn_ = [P1, Q1, P2, Q2](double z, double r, int zo, int ro) {
    const JetZR p1 = lift_z(P1->jet(z, zo), zo, ro, z, r);
    const JetZR q1 = lift_r(Q1->jet(r, ro), zo, ro, z, r);
    const JetZR p2 = lift_z(P2->jet(z, zo), zo, ro, z, r);
    const JetZR q2 = lift_r(Q2->jet(r, ro), zo, ro, z, r);
    return jet_add(jet_mul(p1, q1), jet_mul(p2, q2));
  };
  fam.value_fn_ = [P1, Q1, P2, Q2](double z, double r) {
    return P1->value(z) * Q1->value(r) + P2->value(z) * Q2->value(r);
  };
  fam.convexity_fn_ = nullptr;  // covered by the pointwise Omega/Lambda gate
  return fam;
}

MetricFamily MetricFamily::preset(const std::string& name, double rho) {
  // Shared warp profile for the worked examples.
  const char* g_def = "1 + r^2/4";
  if (name == "flat") return flat(parse_expression("sqrt(t^2 + 1)"), rho);
  if (name == "example-1") {
    MetricFamily fam = g_family(parse_expression(g_def), parse_expression("sqrt(t^2 + 0.5)"), rho);
    fam.name_ = name;
    return fam;
  }
  if (name == "example-2") {
    MetricFamily fam =
        g_family(parse_expression(g_def), parse_expression("sqrt(t^2 + 0.5) + 0.3*t"), rho);
    fam.name_ = name;
    return fam;
  }
  if (name == "example-3") {
    MetricFamily fam =
        kernel_family(parse_expression("3/(t^2 + 1)^(5/2)"), 2.0, parse_expression(g_def), rho);
    fam.name_ = name;
    return fam;
  }
  if (name == "example-4") {
    MetricFamily fam = g_family(parse_expression(g_def),
                                parse_expression("(2*t^2 + 1)/sqrt(t^2 + 1) + 2*t"), rho);
    fam.name_ = name;
    return fam;
  }
  if (name == "example-5") {
    MetricFamily fam =
        kernel_family(parse_expression("(t^2 + 1)^(-3)"), 0.875, parse_expression(g_def), rho);
    fam.name_ = name;
    return fam;
  }
  if (name == "douglas-g") {
    MetricFamily fam =
        g_family(parse_expression("1 + r^2"), parse_expression("sqrt(t^2 + 0.5) + 0.3*t"), rho);
    fam.name_ = name;
    return fam;
  }
  if (name == "randers-03") {
    MetricFamily fam = randers(parse_expression("1 + r"), parse_expression("2"), 0.3, rho);
    fam.name_ = name;
    return fam;
  }
  if (name == "perturbed") {
    return custom("perturbed", parse_expression("z^2 + 1"), parse_expression("1"),
                  parse_expression("0.3*sqrt(z^2 + 1)"), parse_expression("1 + r^2"), rho);
  }
  std::ostringstream os;
  os << "unknown preset \"" << name << "\"; available:";
  for (const auto& p : preset_names()) os << " " << p;
  throw DomainError(os.str());
}

std::vector<std::string> MetricFamily::preset_names() {
  return {"flat",      "example-1", "example-2", "example-3", "example-4",
          "example-5", "douglas-g", "randers-03", "perturbed"};
}

ConvexityReport convexity_check(const MetricFamily& fam, const ConvexityGrid& grid) {
  ConvexityReport rep;
  const double r_lo = grid.r_lo < grid.r_hi ? grid.r_lo : fam.r_min();
  const double r_hi = grid.r_lo < grid.r_hi ? grid.r_hi : 0.95 * fam.rho();
  if (grid.nz < 2 || grid.nr < 2) throw DomainError("convexity_check: need at least a 2x2 grid");

  rep.min_omega = rep.min_lambda = std::numeric_limits<double>::infinity();
  std::vector<std::pair<double, double>> node_vals(static_cast<size_t>(grid.nz) * grid.nr,
                                                   {0.0, 0.0});
  std::vector<char> node_bad(static_cast<size_t>(grid.nz) * grid.nr, 0);

  for (int iz = 0; iz < grid.nz; ++iz) {
    const double z = grid.z_lo + (grid.z_hi - grid.z_lo) * iz / (grid.nz - 1);
    for (int ir = 0; ir < grid.nr; ++ir) {
      const double r = r_lo + (r_hi - r_lo) * ir / (grid.nr - 1);
      double omega, lambda;
      try {
        const JetZR phi = fam.phi_jet(z, r, 2, 0, false);
        const double p0 = phi.d(0, 0), p1 = phi.d(1, 0), p2 = phi.d(2, 0);
        omega = 2.0 * p0 - z * p1;
        lambda = 2.0 * p0 * p2 - p1 * p1;
      } catch (const WarpedError&) {
        // Unevaluable node (warp profile nonpositive, ...): counts as failure.
        rep.failure_count++;
        if (!rep.has_failure) {
          rep.has_failure = true;
          rep.first_fail_z = z;
          rep.first_fail_r = r;
        }
        node_bad[static_cast<size_t>(iz) * grid.nr + ir] = 1;
        continue;
      }
      node_vals[static_cast<size_t>(iz) * grid.nr + ir] = {omega, lambda};
      if (omega < rep.min_omega) {
        rep.min_omega = omega;
        rep.argmin_omega_z = z;
        rep.argmin_omega_r = r;
      }
      if (lambda < rep.min_lambda) {
        rep.min_lambda = lambda;
        rep.argmin_lambda_z = z;
        rep.argmin_lambda_r = r;
      }
      if (!(omega > 0.0 && lambda > 0.0)) {
        rep.failure_count++;
        if (!rep.has_failure) {
          rep.has_failure = true;
          rep.first_fail_z = z;
          rep.first_fail_r = r;
        }
      }
    }
  }
  rep.ok = !rep.has_failure;

  // Independent cross-check: diagonalize the assembled tensor at a few nodes
  // and compare the sign of its smallest eigenvalue with the scalar test.
  Rng rng(grid.seed);
  const int n = grid.n;
  for (int spot = 0; spot < grid.eigen_spots; ++spot) {
    const int iz = static_cast<int>(rng.uniform01() * grid.nz) % grid.nz;
    const int ir = static_cast<int>(rng.uniform01() * grid.nr) % grid.nr;
    const std::vector<double> dir = rng.unit_vector(n);
    const double uu = 1.0 + rng.uniform01();
    if (node_bad[static_cast<size_t>(iz) * grid.nr + ir]) continue;
    const double z = grid.z_lo + (grid.z_hi - grid.z_lo) * iz / (grid.nz - 1);
    const double r = r_lo + (r_hi - r_lo) * ir / (grid.nr - 1);
    const auto [omega, lambda] = node_vals[static_cast<size_t>(iz) * grid.nr + ir];
    JetZR phi = fam.phi_jet(z, r, 2, 0, false);
    const double p1 = phi.d(1, 0), p2 = phi.d(2, 0);
    const double omega_z = p1 - z * p2;

    Eigen::MatrixXd gm(n + 1, n + 1);
    gm(0, 0) = 0.5 * p2;
    for (int i = 0; i < n; ++i) {
      const double yi = uu * dir[i];
      gm(0, i + 1) = gm(i + 1, 0) = 0.5 * omega_z * yi / uu;
      for (int j = 0; j <= i; ++j) {
        const double yj = uu * dir[j];
        double v = -0.5 * z * omega_z * yi * yj / (uu * uu);
        if (i == j) v += 0.5 * omega;
        gm(i + 1, j + 1) = gm(j + 1, i + 1) = v;
      }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gm);
    const double min_eig = es.eigenvalues().minCoeff();
    const bool scalar_pd = omega > 0.0 && lambda > 0.0;
    // Nodes sitting on the convexity boundary are too ambiguous to call.
    if (std::abs(min_eig) < 1e-10 || std::abs(std::min(omega, lambda)) < 1e-10) continue;
    rep.eigen_spots++;
    if ((min_eig > 0.0) != scalar_pd) rep.eigen_consistent = false;
  }
  return rep;
}

double rotation_invariance_check(const MetricFamily& fam, int n, int trials, std::uint64_t seed) {
  Rng rng(seed);
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    const double r = rng.uniform(fam.r_min() * 1.5, 0.9 * fam.rho());
    const double uu = rng.uniform(0.5, 2.0);
    const double z = rng.uniform(-2.0, 2.0);
    const std::vector<double> xd = rng.unit_vector(n);
    const std::vector<double> yd = rng.unit_vector(n);
    const auto Q = rng.orthogonal(n);

    std::vector<double> xbar(n), ybar(n), xrot(n), yrot(n);
    for (int i = 0; i < n; ++i) {
      xbar[i] = r * xd[i];
      ybar[i] = uu * yd[i];
    }
    for (int i = 0; i < n; ++i) {
      double ax = 0.0, ay = 0.0;
      for (int j = 0; j < n; ++j) {
        ax += Q[j][i] * xbar[j];  // columns of Q are orthonormal
        ay += Q[j][i] * ybar[j];
      }
      xrot[i] = ax;
      yrot[i] = ay;
    }

    auto fval = [&](const std::vector<double>& xb, const std::vector<double>& yb) {
      double r2 = 0.0, u2 = 0.0;
      for (int i = 0; i < n; ++i) {
        r2 += xb[i] * xb[i];
        u2 += yb[i] * yb[i];
      }
      const double rr = std::sqrt(r2), uv = std::sqrt(u2);
      return fam.finsler_value(z * uu / uv, rr, uv);
    };
    try {
      worst = std::fmax(worst, std::abs(fval(xrot, yrot) - fval(xbar, ybar)));
    } catch (const DomainError&) {
      // rotated radius can land a hair outside [r_min, rho) near the edges
      continue;
    }
  }
  return worst;
}

}  // namespace warped
