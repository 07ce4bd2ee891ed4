#pragma once

#include <vector>

namespace warped {

// Richardson extrapolation of a finite-difference estimator D(h) whose error
// expands in even powers of h. levels = 1 returns D(h) unchanged.
template <class F>
double richardson(F&& D, double h, int levels) {
  if (levels < 1) levels = 1;
  std::vector<double> t(static_cast<size_t>(levels));
  for (int i = 0; i < levels; ++i) t[i] = D(h / static_cast<double>(1 << i));
  double pow4 = 4.0;
  for (int m = 1; m < levels; ++m) {
    for (int i = levels - 1; i >= m; --i) t[i] = (pow4 * t[i] - t[i - 1]) / (pow4 - 1.0);
    pow4 *= 4.0;
  }
  return t[levels - 1];
}

}  // namespace warped
