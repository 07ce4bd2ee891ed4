#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "warped/curvature.hpp"
#include "warped/errors.hpp"
#include "warped/expr.hpp"
#include "warped/families.hpp"
#include "warped/fd_oracle.hpp"
#include "warped/point.hpp"
#include "warped/rng.hpp"
#include "warped/scalars.hpp"
#include "warped/tensor.hpp"

using namespace warped;

namespace {

EvalPoint random_point(const MetricFamily& fam, int n, Rng& rng) {
  // Stay well inside [r_min, rho) so the x stencils fit without shrinking.
  const double r = rng.uniform(2.0 * fam.r_min(), 0.85 * fam.rho());
  const double uu = rng.uniform(0.7, 1.8);
  const double y0 = rng.uniform(-1.6, 1.6);
  const std::vector<double> xd = rng.unit_vector(n);
  const std::vector<double> yd = rng.unit_vector(n);
  std::vector<double> xbar(n), ybar(n);
  for (int i = 0; i < n; ++i) {
    xbar[i] = r * xd[i];
    ybar[i] = uu * yd[i];
  }
  return make_point(n, rng.uniform(-1.0, 1.0), std::move(xbar), y0, std::move(ybar));
}

double sup_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (size_t i = 0; i < a.size(); ++i) m = std::fmax(m, std::abs(a[i] - b[i]));
  return m;
}

double rank4_dev(const Rank4& closed, const Rank4& fd, const EvalPoint& p) {
  double diff = 0.0;
  for (size_t i = 0; i < closed.v.size(); ++i)
    diff = std::fmax(diff, std::abs(closed.v[i] - fd.v[i]));
  return diff * p.u / std::fmax(1.0, normalized_sup(closed, p));
}

}  // namespace

TEST_CASE("fd hessian reproduces the closed-form metric") {
  Rng rng(101);
  for (const auto& name : {"example-2", "randers-03", "perturbed"}) {
    const MetricFamily fam = MetricFamily::preset(name);
    for (int n : {2, 3}) {
      for (int trial = 0; trial < 4; ++trial) {
        const EvalPoint p = random_point(fam, n, rng);
        const DerivedScalars S = derived_scalars(fam, p.z, p.r, n);
        const FundamentalTensor ft = fundamental_tensor(S, p);
        const SquareMatrix gfd = hessian_fd(fam, p);
        double diff = 0.0, mag = 0.0;
        for (size_t i = 0; i < gfd.a.size(); ++i) {
          diff = std::fmax(diff, std::abs(gfd.a[i] - ft.g.a[i]));
          mag = std::fmax(mag, std::abs(ft.g.a[i]));
        }
        CAPTURE(name);
        CAPTURE(n);
        CHECK(diff <= 1e-6 * std::fmax(1.0, mag));
      }
    }
  }
}

TEST_CASE("fd spray reproduces the closed-form spray") {
  Rng rng(103);
  for (const auto& name : {"example-2", "randers-03", "perturbed", "douglas-g"}) {
    const MetricFamily fam = MetricFamily::preset(name);
    for (int n : {2, 3}) {
      for (int trial = 0; trial < 3; ++trial) {
        const EvalPoint p = random_point(fam, n, rng);
        const DerivedScalars S = derived_scalars(fam, p.z, p.r, n);
        const std::vector<double> Gc = spray(S, p);
        const std::vector<double> Gf = spray_fd(fam, p);
        double mag = 0.0;
        for (double v : Gc) mag = std::fmax(mag, std::abs(v));
        const double u2 = p.u * p.u;
        CAPTURE(name);
        CAPTURE(n);
        CHECK(sup_diff(Gc, Gf) / u2 <= 1e-5 * std::fmax(1.0, mag / u2));
      }
    }
  }
}

TEST_CASE("fd third derivatives reproduce berwald and douglas tensors") {
  Rng rng(107);
  for (const auto& name : {"randers-03", "perturbed"}) {
    const MetricFamily fam = MetricFamily::preset(name);
    for (int n : {2, 3}) {
      for (int trial = 0; trial < 2; ++trial) {
        const EvalPoint p = random_point(fam, n, rng);
        const DerivedScalars S = derived_scalars(fam, p.z, p.r, n);
        const Rank4 B = berwald_tensor(S, p);
        const Rank4 D = douglas_tensor(S, p);
        CAPTURE(name);
        CAPTURE(n);
        CHECK(rank4_dev(B, berwald_fd(fam, p), p) <= 1e-5);
        CHECK(rank4_dev(D, douglas_fd(fam, p), p) <= 1e-5);
      }
    }
  }
}

TEST_CASE("fd third differences of polynomial sprays collapse to noise") {
  // douglas-g has a quadratic trace-corrected spray, so the differenced
  // tensor is pure rounding noise; flat has a vanishing spray altogether.
  Rng rng(109);
  const MetricFamily dg = MetricFamily::preset("douglas-g");
  const EvalPoint p = random_point(dg, 3, rng);
  CHECK(douglas_fd(dg, p).sup_abs() * p.u <= 1e-7);

  const MetricFamily fl = MetricFamily::preset("flat");
  const EvalPoint q = random_point(fl, 3, rng);
  CHECK(berwald_fd(fl, q).sup_abs() == 0.0);
  CHECK(douglas_fd(fl, q).sup_abs() == 0.0);
}

TEST_CASE("fd ricci vanishes exactly for the ricci-flat warp") {
  const FuncPtr G = parse_expression("sqrt(t^2 + 1)");
  Rng rng(113);
  const MetricFamily fam = MetricFamily::g_family(parse_expression("r^2"), G);
  for (int n : {3, 4}) {
    for (int trial = 0; trial < 3; ++trial) {
      const EvalPoint p = random_point(fam, n, rng);
      CAPTURE(n);
      CHECK(std::abs(ricci_fd(fam, p)) <= 1e-6 * p.u * p.u);
    }
  }
}

TEST_CASE("fd ricci flags the non-ricci-flat warp") {
  const FuncPtr G = parse_expression("sqrt(t^2 + 1)");
  Rng rng(127);
  const MetricFamily fam = MetricFamily::g_family(parse_expression("r"), G);
  int big = 0;
  for (int trial = 0; trial < 6; ++trial) {
    const EvalPoint p = random_point(fam, 3, rng);
    if (std::abs(ricci_fd(fam, p)) > 1e-3) big++;
  }
  CHECK(big >= 5);
}

TEST_CASE("fd ricci agrees in sign with the scalar residuals") {
  // The two scalar residuals and the differenced Ricci must agree on where
  // flatness holds: power-law warps with exponent 2 pass, others fail.
  const FuncPtr G = parse_expression("sqrt(t^2 + 1)");
  for (const char* h : {"r^2", "r^1.3"}) {
    const MetricFamily fam = MetricFamily::g_family(parse_expression(h), G);
    const EvalPoint p = make_point(3, 0.2, {0.4, 0.3, 0.1}, 0.8, {0.9, -0.5, 0.4});
    const DerivedScalars S = derived_scalars(fam, p.z, p.r, 3);
    const bool scalar_flat = ricci_flat_residuals(S).max() < 1e-8;
    const bool fd_flat = std::abs(ricci_fd(fam, p)) < 1e-5;
    CAPTURE(h);
    CHECK(scalar_flat == fd_flat);
  }
}

TEST_CASE("stencils that cannot fit the domain are rejected") {
  MetricFamily fam = MetricFamily::preset("example-1");
  // Exactly representable inner guard; r lands on it without rounding, so no
  // centered x stencil can fit however far the step shrinks.
  fam.set_r_min(0.25);
  const EvalPoint p = make_point(3, 0.0, {0.25, 0.0, 0.0}, 0.7, {1.0, 0.0, 0.0});
  CHECK(p.r == 0.25);
  CHECK_THROWS_AS(spray_fd(fam, p), FDStepError);
  CHECK_THROWS_AS(projective_flat_residual(fam, p), FDStepError);
}

TEST_CASE("fd configuration is honored") {
  const MetricFamily fam = MetricFamily::preset("example-2");
  const EvalPoint p = make_point(2, 0.1, {0.3, 0.4}, 0.6, {0.8, 0.6});
  const DerivedScalars S = derived_scalars(fam, p.z, p.r, 2);
  const FundamentalTensor ft = fundamental_tensor(S, p);

  FDConfig coarse;
  coarse.step_y_rel = 0.3;  // deliberately poor
  coarse.richardson_levels = 0;
  const SquareMatrix bad = hessian_fd(fam, p, coarse);
  const SquareMatrix good = hessian_fd(fam, p);
  double err_bad = 0.0, err_good = 0.0;
  for (size_t i = 0; i < bad.a.size(); ++i) {
    err_bad = std::fmax(err_bad, std::abs(bad.a[i] - ft.g.a[i]));
    err_good = std::fmax(err_good, std::abs(good.a[i] - ft.g.a[i]));
  }
  CHECK(err_good < err_bad);
}
