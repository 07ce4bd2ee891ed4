#include "warped/quadrature.hpp"

#include <cmath>
#include <sstream>

namespace warped {

namespace {

// 16-point Gauss-Legendre rule on [-1, 1].
constexpr int kGL = 16;
constexpr double kNodes[kGL] = {
    -0.9894009349916499, -0.9445750230732326, -0.8656312023878318, -0.7554044083550030,
    -0.6178762444026438, -0.4580167776572274, -0.2816035507792589, -0.0950125098376374,
    0.0950125098376374,  0.2816035507792589,  0.4580167776572274,  0.6178762444026438,
    0.7554044083550030,  0.8656312023878318,  0.9445750230732326,  0.9894009349916499};
constexpr double kWeights[kGL] = {
    0.0271524594117541, 0.0622535239386479, 0.0951585116824928, 0.1246289712555339,
    0.1495959888165767, 0.1691565193950025, 0.1826034150449236, 0.1894506104550685,
    0.1894506104550685, 0.1826034150449236, 0.1691565193950025, 0.1495959888165767,
    0.1246289712555339, 0.0951585116824928, 0.0622535239386479, 0.0271524594117541};

double panel_sum(const std::function<double(double)>& f, double a, double b, int panels) {
  const double w = (b - a) / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * w;
    const double mid = lo + 0.5 * w;
    double acc = 0.0;
    for (int i = 0; i < kGL; ++i) acc += kWeights[i] * f(mid + 0.5 * w * kNodes[i]);
    total += 0.5 * w * acc;
  }
  return total;
}

}  // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a, double b) {
  if (a == b) return 0.0;
  constexpr double kTol = 1e-12;
  constexpr int kMaxPanels = 1 << 14;
  double prev = panel_sum(f, a, b, 1);
  for (int panels = 2; panels <= kMaxPanels; panels *= 2) {
    const double cur = panel_sum(f, a, b, panels);
    if (std::abs(cur - prev) < kTol * std::fmax(1.0, std::abs(cur))) return cur;
    prev = cur;
  }
  std::ostringstream os;
  os << "integrate_adaptive: no convergence on [" << a << ", " << b << "] after " << kMaxPanels
     << " panels";
  throw QuadratureError(os.str());
}

KernelProfile::KernelProfile(FuncPtr kernel, double c) : kernel_(std::move(kernel)), c_(c) {
  if (!kernel_) throw DomainError("KernelProfile: null kernel");
}

std::vector<double> KernelProfile::derivatives(double t, int order) const {
  if (order < 0 || order > kMaxDerivOrder)
    throw JetOrderError("KernelProfile: derivative order out of range");
  const double kval = kernel_->value(t);
  if (!(kval > 0.0)) {
    std::ostringstream os;
    os << "kernel " << kernel_->describe() << " must be positive; got " << kval << " at t = " << t;
    throw DomainError(os.str());
  }
  std::vector<double> out(static_cast<size_t>(order) + 1);
  out[0] = c_ + integrate_adaptive(
                    [&](double tau) { return (t - tau) * kernel_->value(tau); }, 0.0, t);
  if (order >= 1)
    out[1] = integrate_adaptive([&](double tau) { return kernel_->value(tau); }, 0.0, t);
  if (order >= 2) {
    const std::vector<double> kd = kernel_->derivatives(t, order - 2);
    for (int m = 2; m <= order; ++m) out[m] = kd[m - 2];
  }
  return out;
}

std::string KernelProfile::describe() const {
  std::ostringstream os;
  os << "kernel-profile(kernel = " << kernel_->describe() << ", c = " << c_ << ")";
  return os.str();
}

}  // namespace warped
