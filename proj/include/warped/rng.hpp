#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "warped/errors.hpp"

namespace warped {

// splitmix64 step; used to derive independent per-index streams from one seed
// so results do not depend on scheduling order.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t x = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ULL;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBULL;
  x ^= x >> 31;
  return x;
}

// Deterministic draws built directly on mt19937_64 output; none of the
// distribution helpers delegate to std::uniform_real_distribution etc., whose
// sequences are not pinned by the standard.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  double normal() {
    // Box-Muller, cosine branch only; wasting the sine keeps the draw count
    // per call fixed, which matters for reproducibility across refactors.
    double u1 = uniform01();
    if (u1 < 1e-300) u1 = 1e-300;
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
  }

  std::vector<double> unit_vector(int n) {
    for (int attempt = 0; attempt < 64; ++attempt) {
      std::vector<double> v(n);
      double norm2 = 0.0;
      for (double& c : v) {
        c = normal();
        norm2 += c * c;
      }
      if (norm2 > 1e-24) {
        const double inv = 1.0 / std::sqrt(norm2);
        for (double& c : v) c *= inv;
        return v;
      }
    }
    throw WarpedError("Rng::unit_vector: degenerate draws");
  }

  // Random orthogonal matrix by Gram-Schmidt on Gaussian columns.
  std::vector<std::vector<double>> orthogonal(int n) {
    for (int attempt = 0; attempt < 64; ++attempt) {
      std::vector<std::vector<double>> q;
      q.reserve(n);
      bool ok = true;
      for (int col = 0; col < n && ok; ++col) {
        std::vector<double> v(n);
        for (double& c : v) c = normal();
        for (const auto& prev : q) {
          double dot = 0.0;
          for (int i = 0; i < n; ++i) dot += prev[i] * v[i];
          for (int i = 0; i < n; ++i) v[i] -= dot * prev[i];
        }
        double norm2 = 0.0;
        for (double c : v) norm2 += c * c;
        if (norm2 < 1e-12) {
          ok = false;
          break;
        }
        const double inv = 1.0 / std::sqrt(norm2);
        for (double& c : v) c *= inv;
        q.push_back(std::move(v));
      }
      if (ok) return q;
    }
    throw WarpedError("Rng::orthogonal: degenerate draws");
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace warped
