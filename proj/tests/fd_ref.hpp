#pragma once

// Finite-difference reference derivatives for the test suite, kept deliberately
// independent of the jet machinery. Weights come from Fornberg's recurrence for
// arbitrary nodes, so one routine covers every order and stencil width.

#include <algorithm>
#include <cmath>
#include <vector>

namespace fdref {

// Weights w_i with sum_i w_i f(x_i) ~ f^{(m)}(z) for distinct nodes x.
inline std::vector<double> fornberg_weights(double z, const std::vector<double>& x, int m) {
  const int nd = static_cast<int>(x.size()) - 1;
  std::vector<std::vector<double>> c(static_cast<size_t>(nd) + 1,
                                     std::vector<double>(static_cast<size_t>(m) + 1, 0.0));
  double c1 = 1.0;
  double c4 = x[0] - z;
  c[0][0] = 1.0;
  for (int i = 1; i <= nd; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[static_cast<size_t>(i)] - z;
    for (int j = 0; j < i; ++j) {
      const double c3 = x[static_cast<size_t>(i)] - x[static_cast<size_t>(j)];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k)
          c[static_cast<size_t>(i)][static_cast<size_t>(k)] =
              c1 * (k * c[static_cast<size_t>(i - 1)][static_cast<size_t>(k - 1)] -
                    c5 * c[static_cast<size_t>(i - 1)][static_cast<size_t>(k)]) /
              c2;
        c[static_cast<size_t>(i)][0] = -c1 * c5 * c[static_cast<size_t>(i - 1)][0] / c2;
      }
      for (int k = mn; k >= 1; --k)
        c[static_cast<size_t>(j)][static_cast<size_t>(k)] =
            (c4 * c[static_cast<size_t>(j)][static_cast<size_t>(k)] -
             k * c[static_cast<size_t>(j)][static_cast<size_t>(k - 1)]) /
            c3;
      c[static_cast<size_t>(j)][0] = c4 * c[static_cast<size_t>(j)][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(static_cast<size_t>(nd) + 1);
  for (int i = 0; i <= nd; ++i) w[static_cast<size_t>(i)] = c[static_cast<size_t>(i)][static_cast<size_t>(m)];
  return w;
}

inline std::vector<double> centered_nodes(double t0, double h, int half_width) {
  std::vector<double> nodes;
  nodes.reserve(2 * static_cast<size_t>(half_width) + 1);
  for (int k = -half_width; k <= half_width; ++k) nodes.push_back(t0 + k * h);
  return nodes;
}

// d^order f / dt^order at t0 from a centered stencil of 2*half_width+1 points.
template <class F>
double derivative_1d(F&& f, double t0, int order, double h, int half_width) {
  const std::vector<double> nodes = centered_nodes(t0, h, half_width);
  const std::vector<double> w = fornberg_weights(t0, nodes, order);
  double acc = 0.0;
  for (size_t i = 0; i < nodes.size(); ++i) acc += w[i] * f(nodes[i]);
  return acc;
}

// Mixed partial d^{iz+jr} f / dz^iz dr^jr at (z0, r0), tensor-product stencils.
template <class F2>
double partial_zr(F2&& f, double z0, double r0, int iz, int jr, double hz, double hr,
                  int half_width_z, int half_width_r) {
  const std::vector<double> zn = centered_nodes(z0, hz, half_width_z);
  const std::vector<double> wz = fornberg_weights(z0, zn, iz);
  const std::vector<double> rn = centered_nodes(r0, hr, half_width_r);
  const std::vector<double> wr = fornberg_weights(r0, rn, jr);
  double acc = 0.0;
  for (size_t a = 0; a < zn.size(); ++a) {
    double inner = 0.0;
    for (size_t b = 0; b < rn.size(); ++b) inner += wr[b] * f(zn[a], rn[b]);
    acc += wz[a] * inner;
  }
  return acc;
}

}  // namespace fdref
