#pragma once

#include "rslra/types.hpp"

#include <cmath>
#include <cstdint>
#include <random>

namespace rslra {

// Seeded random source with a pinned gaussian transform so that identical
// seeds reproduce identical streams regardless of standard library vendor.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform draw in the open interval (0, 1).
  double uniform() {
    const std::uint64_t bits = engine_() >> 11; // 53 random bits
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
  }

  /// Uniform draw in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal draw (Box-Muller).
  double gaussian() {
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  Matrix gaussian_matrix(Index rows, Index cols) {
    Matrix out(rows, cols);
    for (Index j = 0; j < cols; ++j)
      for (Index i = 0; i < rows; ++i) out(i, j) = gaussian();
    return out;
  }

  Vector gaussian_vector(Index n) {
    Vector out(n);
    for (Index i = 0; i < n; ++i) out(i) = gaussian();
    return out;
  }

private:
  std::mt19937_64 engine_;
};

} // namespace rslra
