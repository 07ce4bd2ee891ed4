#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "warped/jet.hpp"
#include "warped/scalar_function.hpp"

namespace warped {

enum class FamilyKind { Flat, GFamily, Randers, KernelFamily, Custom };

// A conic metric family on R x R^n given through its profile
//   F = |ybar| * sqrt(phi(z, r)),  z = y0/|ybar|,  r = |xbar|.
//
// Two independent evaluation paths are exposed on purpose: phi_jet runs the
// jet pipeline the tensor code consumes, while phi_value is plain double
// arithmetic used by the finite-difference cross-checks, so the two never
// share derivative machinery.
class MetricFamily {
 public:
  static MetricFamily flat(FuncPtr G, double rho = 1.0);
  static MetricFamily g_family(FuncPtr h, FuncPtr G, double rho = 1.0);
  static MetricFamily randers(FuncPtr f, FuncPtr g, double b, double rho = 1.0);
  static MetricFamily kernel_family(FuncPtr kernel, double c, FuncPtr g, double rho = 1.0);
  // phi(z, r) = P1(z) Q1(r) + P2(z) Q2(r)
  static MetricFamily custom(const std::string& name, FuncPtr P1, FuncPtr Q1, FuncPtr P2,
                             FuncPtr Q2, double rho = 1.0);

  static MetricFamily preset(const std::string& name, double rho = 1.0);
  static std::vector<std::string> preset_names();

  // Jet of phi about (z, r) with every stored partial valid to the stated
  // orders. Domain violations (nonpositive profile values, r outside
  // [r_min, rho)) always throw; convexity preconditions throw only when
  // enforce_convexity is set, so scans can evaluate past a violation.
  JetZR phi_jet(double z, double r, int zorder = kDefaultZOrder, int rorder = kDefaultROrder,
                bool enforce_convexity = true) const;

  // Plain-double phi(z, r) with the same domain checks and no jets anywhere.
  double phi_value(double z, double r) const;

  // F(x, y) = u sqrt(phi) from raw coordinates, via phi_value.
  double finsler_value(double z, double r, double u) const;

  void check_r(double r) const;  // r in [r_min, rho) or DomainError

  // Family-specific convexity precondition at (z, r); a message describes the
  // violation, nullopt means the precondition holds (or the family has none).
  std::optional<std::string> convexity_violation(double z, double r) const {
    return convexity_fn_ ? convexity_fn_(z, r) : std::nullopt;
  }

  FamilyKind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  const std::string& description() const { return description_; }
  double rho() const { return rho_; }
  double r_min() const { return r_min_; }
  void set_r_min(double v);

 private:
  MetricFamily() = default;

  FamilyKind kind_ = FamilyKind::Custom;
  std::string name_, description_;
  double rho_ = 1.0;
  double r_min_ = 0.05;

  std::function<JetZR(double, double, int, int)> jet_fn_;
  std::function<double(double, double)> value_fn_;
  // Family-specific convexity precondition; returns a message on violation.
  std::function<std::optional<std::string>(double, double)> convexity_fn_;
};

struct ConvexityGrid {
  double z_lo = -2.0, z_hi = 2.0;
  int nz = 41;
  double r_lo = 0.0, r_hi = 0.0;  // zero width means [r_min, 0.95 rho]
  int nr = 21;
  int n = 3;               // fiber dimension for the eigenvalue spot checks
  int eigen_spots = 10;    // grid nodes where the assembled tensor is diagonalized
  std::uint64_t seed = 1;  // drives spot selection and the synthetic directions
};

struct ConvexityReport {
  bool ok = false;
  double min_omega = 0.0, min_lambda = 0.0;
  double argmin_omega_z = 0.0, argmin_omega_r = 0.0;
  double argmin_lambda_z = 0.0, argmin_lambda_r = 0.0;
  bool has_failure = false;
  double first_fail_z = 0.0, first_fail_r = 0.0;
  int failure_count = 0;
  // Spot checks: smallest eigenvalue of the assembled fundamental tensor must
  // agree in sign with the Omega/Lambda test at the same node.
  bool eigen_consistent = true;
  int eigen_spots = 0;
};

// Scans Omega = 2 phi - z phi_z and Lambda = 2 phi phi_zz - phi_z^2 over a
// (z, r) grid; both positive everywhere is exactly strong convexity of the
// fundamental tensor on the scanned cone.
ConvexityReport convexity_check(const MetricFamily& fam, const ConvexityGrid& grid);

// Max |F(x0, O xbar, y0, O ybar) - F(x0, xbar, y0, ybar)| over random points
// and random orthogonal O; the profile form makes this zero up to rounding.
double rotation_invariance_check(const MetricFamily& fam, int n, int trials, std::uint64_t seed);

}  // namespace warped
