#pragma once

#include "rslra/types.hpp"

#include <cstdint>
#include <vector>

namespace rslra::datagen {

/// Simulated SISO linear time-varying system: the state rotates under
/// A(t) = exp(drift * t * Z) with Z skew-symmetric, so the noise-free state
/// norm is conserved. The observation is c^T x(t) plus Gaussian noise and
/// salt-and-pepper outliers.
struct LTVSpec {
  Index k = 5;           // state dimension
  Index N = 300;         // sample count
  double drift = 0.001;  // time-variation rate
  double sigma = 0.01;   // Gaussian noise std
  double sp_rate = 0.05; // outlier probability per sample
  double sp_amp = 0.5;   // outlier magnitude (sign is random)
  std::uint64_t seed = 0;

  void validate() const;
};

struct LTVData {
  Vector clean;
  Vector noisy;
  std::vector<bool> outlier_mask;
  Matrix states; // k-by-N noise-free state trajectory
};

/// Skew-symmetric k-by-k matrix with i.i.d. standard normal entries above
/// the diagonal. Z^T = -Z holds exactly.
Matrix random_skew_symmetric(Index k, std::uint64_t seed);

/// Impulse response of the LTV system over N samples: x(1) = b,
/// x(t+1) = A(t) x(t), y(t) = c^T x(t) + noise, with b, c entry-wise
/// uniform on [0, 1].
LTVData ltv_impulse_response(const LTVSpec& spec);

/// Exact order-k series: floor(k/2) undamped sinusoids with well-separated
/// seeded frequencies, plus one slowly decaying exponential when k is odd.
/// Its m-by-n Hankel matrix has numerical rank k for m, n > k.
Vector lti_series(Index k, Index N, std::uint64_t seed);

} // namespace rslra::datagen
