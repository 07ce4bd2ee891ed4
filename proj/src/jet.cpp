#include "warped/jet.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace warped {

namespace {

constexpr int kBinomialMax = 24;

const double* binomial_table() {
  static const auto table = [] {
    static double t[kBinomialMax + 1][kBinomialMax + 1];
    for (int n = 0; n <= kBinomialMax; ++n) {
      t[n][0] = 1.0;
      for (int k = 1; k <= n; ++k)
        t[n][k] = t[n - 1][k - 1] + (k <= n - 1 ? t[n - 1][k] : 0.0);
      for (int k = n + 1; k <= kBinomialMax; ++k) t[n][k] = 0.0;
    }
    return &t[0][0];
  }();
  return table;
}

void require_same_point(const JetZR& a, const JetZR& b, const char* op) {
  if (a.z0() != b.z0() || a.r0() != b.r0()) {
    std::ostringstream os;
    os << op << ": operands expanded at different points (" << a.z0() << ", "
       << a.r0() << ") vs (" << b.z0() << ", " << b.r0() << ")";
    throw JetMismatchError(os.str());
  }
}

}  // namespace

double binomial(int n, int k) {
  if (n < 0 || k < 0 || k > n || n > kBinomialMax) throw JetOrderError("binomial: argument out of range");
  return binomial_table()[n * (kBinomialMax + 1) + k];
}

JetZR::JetZR(int zorder, int rorder, double z0, double r0)
    : zo_(zorder), ro_(rorder), z0_(z0), r0_(r0) {
  if (zorder < 0 || rorder < 0 || zorder + rorder > kBinomialMax)
    throw JetOrderError("JetZR: unsupported truncation order");
  d_.assign(static_cast<size_t>(zo_ + 1) * (ro_ + 1), 0.0);
}

double JetZR::d(int i, int j) const {
  if (i < 0 || j < 0 || i > zo_ || j > ro_) {
    std::ostringstream os;
    os << "JetZR: partial (" << i << "," << j << ") beyond stored order (" << zo_ << "," << ro_ << ")";
    throw JetOrderError(os.str());
  }
  return d_[static_cast<size_t>(i) * (ro_ + 1) + j];
}

double& JetZR::d(int i, int j) {
  if (i < 0 || j < 0 || i > zo_ || j > ro_) {
    std::ostringstream os;
    os << "JetZR: partial (" << i << "," << j << ") beyond stored order (" << zo_ << "," << ro_ << ")";
    throw JetOrderError(os.str());
  }
  return d_[static_cast<size_t>(i) * (ro_ + 1) + j];
}

JetZR jet_const(double c, int zorder, int rorder, double z0, double r0) {
  JetZR out(zorder, rorder, z0, r0);
  out.d(0, 0) = c;
  return out;
}

JetZR jet_var_z(int zorder, int rorder, double z0, double r0) {
  JetZR out(zorder, rorder, z0, r0);
  out.d(0, 0) = z0;
  if (zorder >= 1) out.d(1, 0) = 1.0;
  return out;
}

JetZR jet_var_r(int zorder, int rorder, double z0, double r0) {
  JetZR out(zorder, rorder, z0, r0);
  out.d(0, 0) = r0;
  if (rorder >= 1) out.d(0, 1) = 1.0;
  return out;
}

JetZR jet_add(const JetZR& a, const JetZR& b) {
  require_same_point(a, b, "jet_add");
  JetZR c(std::min(a.zorder(), b.zorder()), std::min(a.rorder(), b.rorder()), a.z0(), a.r0());
  for (int i = 0; i <= c.zorder(); ++i)
    for (int j = 0; j <= c.rorder(); ++j) c.d(i, j) = a.d(i, j) + b.d(i, j);
  return c;
}

JetZR jet_sub(const JetZR& a, const JetZR& b) {
  require_same_point(a, b, "jet_sub");
  JetZR c(std::min(a.zorder(), b.zorder()), std::min(a.rorder(), b.rorder()), a.z0(), a.r0());
  for (int i = 0; i <= c.zorder(); ++i)
    for (int j = 0; j <= c.rorder(); ++j) c.d(i, j) = a.d(i, j) - b.d(i, j);
  return c;
}

JetZR jet_neg(const JetZR& a) { return jet_scale(a, -1.0); }

JetZR jet_scale(const JetZR& a, double c) {
  JetZR out(a.zorder(), a.rorder(), a.z0(), a.r0());
  for (int i = 0; i <= a.zorder(); ++i)
    for (int j = 0; j <= a.rorder(); ++j) out.d(i, j) = c * a.d(i, j);
  return out;
}

JetZR jet_mul(const JetZR& a, const JetZR& b) {
  require_same_point(a, b, "jet_mul");
  JetZR c(std::min(a.zorder(), b.zorder()), std::min(a.rorder(), b.rorder()), a.z0(), a.r0());
  for (int i = 0; i <= c.zorder(); ++i)
    for (int j = 0; j <= c.rorder(); ++j) {
      double acc = 0.0;
      for (int p = 0; p <= i; ++p)
        for (int q = 0; q <= j; ++q)
          acc += binomial(i, p) * binomial(j, q) * a.d(p, q) * b.d(i - p, j - q);
      c.d(i, j) = acc;
    }
  return c;
}

JetZR jet_div(const JetZR& a, const JetZR& b) {
  require_same_point(a, b, "jet_div");
  const double b0 = b.d(0, 0);
  if (std::abs(b0) < kJetSingularEps)
    throw SingularJetError("jet_div: divisor constant term within 1e-12 of zero", b0);
  JetZR c(std::min(a.zorder(), b.zorder()), std::min(a.rorder(), b.rorder()), a.z0(), a.r0());
  // Solve a = c*b for c by the Leibniz recurrence, lowest orders first.
  for (int i = 0; i <= c.zorder(); ++i)
    for (int j = 0; j <= c.rorder(); ++j) {
      double acc = a.d(i, j);
      for (int p = 0; p <= i; ++p)
        for (int q = 0; q <= j; ++q) {
          if (p == i && q == j) continue;
          acc -= binomial(i, p) * binomial(j, q) * c.d(p, q) * b.d(i - p, j - q);
        }
      c.d(i, j) = acc / b0;
    }
  return c;
}

JetZR jet_sqrt(const JetZR& a) {
  const double a0 = a.d(0, 0);
  if (a0 < 0.0) throw JetDomainError("jet_sqrt: negative constant term", a0);
  if (a0 < kJetSingularEps)
    throw SingularJetError("jet_sqrt: constant term within 1e-12 of zero", a0);
  JetZR s(a.zorder(), a.rorder(), a.z0(), a.r0());
  const double s0 = std::sqrt(a0);
  s.d(0, 0) = s0;
  // Solve s*s = a, lowest orders first; the two boundary terms give 2*s0*s(i,j).
  for (int i = 0; i <= a.zorder(); ++i)
    for (int j = 0; j <= a.rorder(); ++j) {
      if (i == 0 && j == 0) continue;
      double acc = a.d(i, j);
      for (int p = 0; p <= i; ++p)
        for (int q = 0; q <= j; ++q) {
          if ((p == 0 && q == 0) || (p == i && q == j)) continue;
          acc -= binomial(i, p) * binomial(j, q) * s.d(p, q) * s.d(i - p, j - q);
        }
      s.d(i, j) = acc / (2.0 * s0);
    }
  return s;
}

JetZR jet_powi(const JetZR& a, int k) {
  if (k == 0) return jet_const(1.0, a.zorder(), a.rorder(), a.z0(), a.r0());
  if (k < 0) return jet_div(jet_const(1.0, a.zorder(), a.rorder(), a.z0(), a.r0()), jet_powi(a, -k));
  JetZR out = a;
  for (int m = 1; m < k; ++m) out = jet_mul(out, a);
  return out;
}

JetZR jet_compose_univariate(const std::vector<double>& gderivs, const JetZR& a) {
  const int need = a.zorder() + a.rorder();
  if (static_cast<int>(gderivs.size()) < need + 1)
    throw JetOrderError("jet_compose_univariate: outer derivatives supplied below the required order");
  // w = a - a(0,0) has no constant term, so w^k contributes nothing beyond
  // total degree k; Horner in w therefore terminates exactly at degree `need`.
  JetZR w = a;
  w.d(0, 0) = 0.0;
  std::vector<double> taylor(need + 1);
  double fact = 1.0;
  for (int k = 0; k <= need; ++k) {
    if (k > 0) fact *= k;
    taylor[k] = gderivs[k] / fact;
  }
  JetZR res = jet_const(taylor[need], a.zorder(), a.rorder(), a.z0(), a.r0());
  for (int k = need - 1; k >= 0; --k)
    res = jet_add(jet_mul(res, w), jet_const(taylor[k], a.zorder(), a.rorder(), a.z0(), a.r0()));
  return res;
}

JetZR jet_dz(const JetZR& a) {
  if (a.zorder() < 1) throw JetOrderError("jet_dz: z-order exhausted");
  JetZR c(a.zorder() - 1, a.rorder(), a.z0(), a.r0());
  for (int i = 0; i <= c.zorder(); ++i)
    for (int j = 0; j <= c.rorder(); ++j) c.d(i, j) = a.d(i + 1, j);
  return c;
}

JetZR jet_dr(const JetZR& a) {
  if (a.rorder() < 1) throw JetOrderError("jet_dr: r-order exhausted");
  JetZR c(a.zorder(), a.rorder() - 1, a.z0(), a.r0());
  for (int i = 0; i <= c.zorder(); ++i)
    for (int j = 0; j <= c.rorder(); ++j) c.d(i, j) = a.d(i, j + 1);
  return c;
}

JetZR operator+(const JetZR& a, double c) {
  JetZR out = a;
  out.d(0, 0) += c;
  return out;
}
JetZR operator+(double c, const JetZR& a) { return a + c; }
JetZR operator-(const JetZR& a, double c) { return a + (-c); }
JetZR operator-(double c, const JetZR& a) {
  JetZR out = jet_neg(a);
  out.d(0, 0) += c;
  return out;
}
JetZR operator/(double c, const JetZR& a) {
  return jet_div(jet_const(c, a.zorder(), a.rorder(), a.z0(), a.r0()), a);
}

Jet1D::Jet1D(int order, double t0) : ord_(order), t0_(t0) {
  if (order < 0 || order > kBinomialMax) throw JetOrderError("Jet1D: unsupported truncation order");
  c_.assign(static_cast<size_t>(order) + 1, 0.0);
}

Jet1D Jet1D::constant(double v, int order, double t0) {
  Jet1D j(order, t0);
  j.c_[0] = v;
  return j;
}

Jet1D Jet1D::variable(double t0, int order) {
  Jet1D j(order, t0);
  j.c_[0] = t0;
  if (order >= 1) j.c_[1] = 1.0;
  return j;
}

double Jet1D::coeff(int k) const {
  if (k < 0 || k > ord_) throw JetOrderError("Jet1D: coefficient beyond stored order");
  return c_[k];
}

double& Jet1D::coeff(int k) {
  if (k < 0 || k > ord_) throw JetOrderError("Jet1D: coefficient beyond stored order");
  return c_[k];
}

double Jet1D::deriv(int k) const {
  double fact = 1.0;
  for (int m = 2; m <= k; ++m) fact *= m;
  return fact * coeff(k);
}

std::vector<double> Jet1D::derivs(int m) const {
  std::vector<double> out(static_cast<size_t>(m) + 1);
  double fact = 1.0;
  for (int k = 0; k <= m; ++k) {
    if (k > 1) fact *= k;
    out[k] = fact * coeff(k);
  }
  return out;
}

namespace {

void require_same_point1(const Jet1D& a, const Jet1D& b, const char* op) {
  if (a.t0() != b.t0()) {
    std::ostringstream os;
    os << op << ": operands expanded at different points " << a.t0() << " vs " << b.t0();
    throw JetMismatchError(os.str());
  }
}

int min_order(const Jet1D& a, const Jet1D& b) { return std::min(a.order(), b.order()); }

}  // namespace

Jet1D jet1_add(const Jet1D& a, const Jet1D& b) {
  require_same_point1(a, b, "jet1_add");
  Jet1D c(min_order(a, b), a.t0());
  for (int k = 0; k <= c.order(); ++k) c.coeff(k) = a.coeff(k) + b.coeff(k);
  return c;
}

Jet1D jet1_sub(const Jet1D& a, const Jet1D& b) {
  require_same_point1(a, b, "jet1_sub");
  Jet1D c(min_order(a, b), a.t0());
  for (int k = 0; k <= c.order(); ++k) c.coeff(k) = a.coeff(k) - b.coeff(k);
  return c;
}

Jet1D jet1_neg(const Jet1D& a) { return jet1_scale(a, -1.0); }

Jet1D jet1_scale(const Jet1D& a, double c) {
  Jet1D out(a.order(), a.t0());
  for (int k = 0; k <= a.order(); ++k) out.coeff(k) = c * a.coeff(k);
  return out;
}

Jet1D jet1_mul(const Jet1D& a, const Jet1D& b) {
  require_same_point1(a, b, "jet1_mul");
  Jet1D c(min_order(a, b), a.t0());
  for (int k = 0; k <= c.order(); ++k) {
    double acc = 0.0;
    for (int m = 0; m <= k; ++m) acc += a.coeff(m) * b.coeff(k - m);
    c.coeff(k) = acc;
  }
  return c;
}

Jet1D jet1_div(const Jet1D& a, const Jet1D& b) {
  require_same_point1(a, b, "jet1_div");
  const double b0 = b.coeff(0);
  if (std::abs(b0) < kJetSingularEps)
    throw SingularJetError("jet1_div: divisor constant term within 1e-12 of zero", b0);
  Jet1D c(min_order(a, b), a.t0());
  for (int k = 0; k <= c.order(); ++k) {
    double acc = a.coeff(k);
    for (int m = 0; m < k; ++m) acc -= c.coeff(m) * b.coeff(k - m);
    c.coeff(k) = acc / b0;
  }
  return c;
}

Jet1D jet1_sqrt(const Jet1D& a) {
  const double a0 = a.coeff(0);
  if (a0 < 0.0) throw JetDomainError("jet1_sqrt: negative constant term", a0);
  if (a0 < kJetSingularEps)
    throw SingularJetError("jet1_sqrt: constant term within 1e-12 of zero", a0);
  Jet1D s(a.order(), a.t0());
  s.coeff(0) = std::sqrt(a0);
  for (int k = 1; k <= a.order(); ++k) {
    double acc = a.coeff(k);
    for (int m = 1; m < k; ++m) acc -= s.coeff(m) * s.coeff(k - m);
    s.coeff(k) = acc / (2.0 * s.coeff(0));
  }
  return s;
}

Jet1D jet1_exp(const Jet1D& a) {
  Jet1D e(a.order(), a.t0());
  e.coeff(0) = std::exp(a.coeff(0));
  for (int k = 1; k <= a.order(); ++k) {
    double acc = 0.0;
    for (int m = 1; m <= k; ++m) acc += m * a.coeff(m) * e.coeff(k - m);
    e.coeff(k) = acc / k;
  }
  return e;
}

Jet1D jet1_log(const Jet1D& a) {
  const double a0 = a.coeff(0);
  if (a0 <= 0.0) throw JetDomainError("jet1_log: nonpositive constant term", a0);
  // l' = a'/a, integrated term by term.
  Jet1D l(a.order(), a.t0());
  l.coeff(0) = std::log(a0);
  for (int k = 1; k <= a.order(); ++k) {
    double acc = k * a.coeff(k);
    for (int m = 1; m < k; ++m) acc -= m * l.coeff(m) * a.coeff(k - m);
    l.coeff(k) = acc / (k * a0);
  }
  return l;
}

Jet1D jet1_atan(const Jet1D& a) {
  // g' = a' / (1 + a^2), integrated term by term.
  Jet1D den(a.order(), a.t0());
  {
    Jet1D sq = jet1_mul(a, a);
    for (int k = 0; k <= a.order(); ++k) den.coeff(k) = sq.coeff(k);
    den.coeff(0) += 1.0;
  }
  Jet1D g(a.order(), a.t0());
  g.coeff(0) = std::atan(a.coeff(0));
  for (int k = 1; k <= a.order(); ++k) {
    double acc = k * a.coeff(k);
    for (int m = 1; m < k; ++m) acc -= m * g.coeff(m) * den.coeff(k - m);
    g.coeff(k) = acc / (k * den.coeff(0));
  }
  return g;
}

Jet1D jet1_powi(const Jet1D& a, int k) {
  if (k == 0) return Jet1D::constant(1.0, a.order(), a.t0());
  if (k < 0) return jet1_div(Jet1D::constant(1.0, a.order(), a.t0()), jet1_powi(a, -k));
  Jet1D out = a;
  for (int m = 1; m < k; ++m) out = jet1_mul(out, a);
  return out;
}

Jet1D jet1_pow(const Jet1D& a, double alpha) {
  const double rounded = std::round(alpha);
  if (std::abs(alpha - rounded) < 1e-12 && std::abs(rounded) <= 64.0)
    return jet1_powi(a, static_cast<int>(rounded));
  if (a.coeff(0) <= 0.0)
    throw JetDomainError("jet1_pow: non-integer power of a nonpositive base", a.coeff(0));
  return jet1_exp(jet1_scale(jet1_log(a), alpha));
}

}  // namespace warped
