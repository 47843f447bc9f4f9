#pragma once

#include "rslra/types.hpp"

#include <vector>

namespace rslra::baselines {

struct BaselineConfig {
  int max_iters = 500;
  double tol = 1e-8; // Frobenius change tolerance, relative to the input norm
};

/// Best rank-k approximation in Frobenius norm (truncated SVD).
Matrix svd_truncate(const Matrix& X, Index k);

/// Single-pass structured denoising: rank-k truncation of the Hankel matrix
/// followed by diagonal averaging.
Vector ssa_denoise(const Vector& d, Index m, Index k);

struct CadzowResult {
  Vector series;
  int iterations = 0;
  bool converged = false;
};

/// Alternating projections between the set of rank-k matrices and the Hankel
/// matrices, until the iterate change drops below tol * ||X0||_F or max_iters
/// is reached. The returned series always comes from a projection step, so
/// its Hankel matrix is exact.
CadzowResult cadzow(const Vector& d, Index m, Index k, const BaselineConfig& cfg = {});

/// l2 forecasting analogue of the robust online scheme: the series is padded
/// with r zeros, the padded positions are treated as unobserved, and each
/// alternating round re-imposes the observed entries after the projection.
/// Returns the last r entries of the completed series.
struct CadzowForecastResult {
  Vector predictions; // r values
  int iterations = 0;
  bool converged = false;
};
CadzowForecastResult cadzow_forecast(const Vector& d, Index m, Index k, Index r,
                                     const BaselineConfig& cfg = {});

} // namespace rslra::baselines
