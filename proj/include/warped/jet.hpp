#pragma once

#include <vector>

#include "warped/errors.hpp"

namespace warped {

// Order budget used throughout the tensor pipeline: z-derivatives to 6, r to 2.
inline constexpr int kDefaultZOrder = 6;
inline constexpr int kDefaultROrder = 2;

// Constant terms smaller than this are treated as singular by jet_div / jet_sqrt.
inline constexpr double kJetSingularEps = 1e-12;

double binomial(int n, int k);

// Truncated jet of a smooth function of (z, r) about a fixed expansion point.
// Storage is raw partial derivatives d(i,j) = d^{i+j} f / dz^i dr^j for
// i <= zorder, j <= rorder (not factorial-normalized Taylor coefficients).
//
// Binary operations require identical expansion points and return a jet
// truncated to the componentwise minimum of the operand orders, so validity
// of every stored entry is preserved automatically through a computation.
class JetZR {
 public:
  // Zero jet of order (0,0) at the origin; a placeholder for containers.
  JetZR() : JetZR(0, 0, 0.0, 0.0) {}
  JetZR(int zorder, int rorder, double z0, double r0);

  int zorder() const { return zo_; }
  int rorder() const { return ro_; }
  double z0() const { return z0_; }
  double r0() const { return r0_; }

  double d(int i, int j) const;
  double& d(int i, int j);

  double value() const { return d_[0]; }

 private:
  int zo_, ro_;
  double z0_, r0_;
  std::vector<double> d_;
};

JetZR jet_const(double c, int zorder, int rorder, double z0, double r0);
JetZR jet_var_z(int zorder, int rorder, double z0, double r0);
JetZR jet_var_r(int zorder, int rorder, double z0, double r0);

JetZR jet_add(const JetZR& a, const JetZR& b);
JetZR jet_sub(const JetZR& a, const JetZR& b);
JetZR jet_neg(const JetZR& a);
JetZR jet_scale(const JetZR& a, double c);
JetZR jet_mul(const JetZR& a, const JetZR& b);
JetZR jet_div(const JetZR& a, const JetZR& b);
JetZR jet_sqrt(const JetZR& a);
JetZR jet_powi(const JetZR& a, int k);

// g o a for a univariate g given by its raw derivatives at a.value():
// gderivs[k] = g^{(k)}(a.value()), k = 0 .. a.zorder() + a.rorder().
JetZR jet_compose_univariate(const std::vector<double>& gderivs, const JetZR& a);

// Differentiation views: one order lower in the respective variable.
JetZR jet_dz(const JetZR& a);
JetZR jet_dr(const JetZR& a);

inline JetZR operator+(const JetZR& a, const JetZR& b) { return jet_add(a, b); }
inline JetZR operator-(const JetZR& a, const JetZR& b) { return jet_sub(a, b); }
inline JetZR operator-(const JetZR& a) { return jet_neg(a); }
inline JetZR operator*(const JetZR& a, const JetZR& b) { return jet_mul(a, b); }
inline JetZR operator/(const JetZR& a, const JetZR& b) { return jet_div(a, b); }
inline JetZR operator*(double c, const JetZR& a) { return jet_scale(a, c); }
inline JetZR operator*(const JetZR& a, double c) { return jet_scale(a, c); }
inline JetZR operator/(const JetZR& a, double c) { return jet_scale(a, 1.0 / c); }

JetZR operator+(const JetZR& a, double c);
JetZR operator+(double c, const JetZR& a);
JetZR operator-(const JetZR& a, double c);
JetZR operator-(double c, const JetZR& a);
JetZR operator/(double c, const JetZR& a);

// Univariate jet with Taylor-normalized storage, used by the expression
// evaluator and by profile functions of one variable. coeff(k) is the Taylor
// coefficient, deriv(k) = k! * coeff(k) the raw derivative.
class Jet1D {
 public:
  Jet1D(int order, double t0);

  static Jet1D constant(double v, int order, double t0);
  static Jet1D variable(double t0, int order);

  int order() const { return ord_; }
  double t0() const { return t0_; }
  double coeff(int k) const;
  double& coeff(int k);
  double deriv(int k) const;
  double value() const { return c_[0]; }

  // Raw derivatives [f, f', ..., f^{(m)}], m <= order().
  std::vector<double> derivs(int m) const;

 private:
  int ord_;
  double t0_;
  std::vector<double> c_;
};

Jet1D jet1_add(const Jet1D& a, const Jet1D& b);
Jet1D jet1_sub(const Jet1D& a, const Jet1D& b);
Jet1D jet1_neg(const Jet1D& a);
Jet1D jet1_scale(const Jet1D& a, double c);
Jet1D jet1_mul(const Jet1D& a, const Jet1D& b);
Jet1D jet1_div(const Jet1D& a, const Jet1D& b);
Jet1D jet1_sqrt(const Jet1D& a);
Jet1D jet1_exp(const Jet1D& a);
Jet1D jet1_log(const Jet1D& a);
Jet1D jet1_atan(const Jet1D& a);
Jet1D jet1_powi(const Jet1D& a, int k);
Jet1D jet1_pow(const Jet1D& a, double alpha);

inline Jet1D operator+(const Jet1D& a, const Jet1D& b) { return jet1_add(a, b); }
inline Jet1D operator-(const Jet1D& a, const Jet1D& b) { return jet1_sub(a, b); }
inline Jet1D operator-(const Jet1D& a) { return jet1_neg(a); }
inline Jet1D operator*(const Jet1D& a, const Jet1D& b) { return jet1_mul(a, b); }
inline Jet1D operator/(const Jet1D& a, const Jet1D& b) { return jet1_div(a, b); }
inline Jet1D operator*(double c, const Jet1D& a) { return jet1_scale(a, c); }
inline Jet1D operator*(const Jet1D& a, double c) { return jet1_scale(a, c); }

inline Jet1D operator+(const Jet1D& a, double c) {
  Jet1D out = a;
  out.coeff(0) += c;
  return out;
}
inline Jet1D operator+(double c, const Jet1D& a) { return a + c; }
inline Jet1D operator-(const Jet1D& a, double c) { return a + (-c); }
inline Jet1D operator-(double c, const Jet1D& a) { return jet1_neg(a) + c; }

}  // namespace warped
