#pragma once

#include <vector>

#include "warped/point.hpp"
#include "warped/scalars.hpp"

namespace warped {

// Rank-4 tensor T^A_{BCD}, A,B,C,D = 0..n, symmetric in (B,C,D) by
// construction. degree is the y-homogeneity of the components; norms
// normalized by u^{-degree} are scale-free.
struct Rank4 {
  int n = 0;
  int degree = 0;
  std::vector<double> v;

  Rank4() = default;
  Rank4(int n_, int degree_)
      : n(n_), degree(degree_), v(static_cast<size_t>(n_ + 1) * (n_ + 1) * (n_ + 1) * (n_ + 1), 0.0) {}

  double& at(int A, int B, int C, int D) {
    const size_t m = n + 1;
    return v[((static_cast<size_t>(A) * m + B) * m + C) * m + D];
  }
  double at(int A, int B, int C, int D) const {
    const size_t m = n + 1;
    return v[((static_cast<size_t>(A) * m + B) * m + C) * m + D];
  }

  double sup_abs() const;
  double frobenius() const;
};

// Rank-3 fully symmetric tensor L_{ABC}.
struct Rank3 {
  int n = 0;
  int degree = 0;
  std::vector<double> v;

  Rank3() = default;
  Rank3(int n_, int degree_)
      : n(n_), degree(degree_), v(static_cast<size_t>(n_ + 1) * (n_ + 1) * (n_ + 1), 0.0) {}

  double& at(int A, int B, int C) {
    const size_t m = n + 1;
    return v[(static_cast<size_t>(A) * m + B) * m + C];
  }
  double at(int A, int B, int C) const {
    const size_t m = n + 1;
    return v[(static_cast<size_t>(A) * m + B) * m + C];
  }

  double sup_abs() const;
  double frobenius() const;
};

// Scale-free sup norm: sup |components| * u^{-degree}.
double normalized_sup(const Rank4& t, const EvalPoint& p);
double normalized_sup(const Rank3& t, const EvalPoint& p);

// Third y-derivatives of the trace-corrected spray (Douglas curvature):
// D^A_{BCD} = d^3 Ghat^A / dy^B dy^C dy^D. Vanishes iff geodesics are
// projectively those of an affine connection.
Rank4 douglas_tensor(const DerivedScalars& S, const EvalPoint& p);

// Third y-derivatives of the spray itself (Berwald curvature):
// B^A_{BCD} = d^3 G^A / dy^B dy^C dy^D.
Rank4 berwald_tensor(const DerivedScalars& S, const EvalPoint& p);

// Landsberg tensor from closed-form components.
Rank3 landsberg_tensor(const DerivedScalars& S, const EvalPoint& p);

// Landsberg tensor by contracting the Berwald tensor with y:
// L_{BCD} = -1/4 [F^2]_{y^A} B^A_{BCD}. Independent route used to cross-check
// the closed form.
Rank3 landsberg_from_berwald(const DerivedScalars& S, const EvalPoint& p, const Rank4& berwald);

// Residuals of the scalar conditions equivalent to vanishing Douglas
// curvature: |R - z R_z|, |T_z|, |W_z - z W_zz| at the expansion point.
struct OdeResiduals {
  double first = 0.0, second = 0.0, third = 0.0;
  double max() const;
};
OdeResiduals douglas_ode_residuals(const DerivedScalars& S);

// Residuals of the two scalar conditions equivalent to vanishing Ricci
// curvature for the profile form; both zero iff Ric = 0 at the point.
struct RicciResiduals {
  double P = 0.0, Q = 0.0;
  double max() const;
};
RicciResiduals ricci_flat_residuals(const DerivedScalars& S);

// Projective flatness defect: max_B |sum_i F_{x^i y^B} y^i - F_{x^B}| with
// analytic y-derivatives and central finite differences (with Richardson
// extrapolation) in x. Zero iff the profile has no r-dependence.
struct ProjFlatConfig {
  double step_rel = 1e-4;  // x step relative to max(r, 1)
  int richardson_levels = 2;
};
double projective_flat_residual(const MetricFamily& fam, const EvalPoint& p,
                                const ProjFlatConfig& cfg = {});

}  // namespace warped
