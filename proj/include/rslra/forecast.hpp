#pragma once

#include "rslra/batch.hpp"
#include "rslra/manifold.hpp"
#include "rslra/structure.hpp"
#include "rslra/types.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace rslra::forecast {

struct ForecastConfig {
  Index k = 1;       // rank bound (system order)
  Index m = 2;       // analysis dimension; windows hold 2m-1 samples
  Index r = 1;       // forecast range
  double mu = 0.005; // fixed smoothing parameter
  double p = 0.5;
  double rho0 = 1e-6;
  double rhoI = 10.0;
  int min_iterations = 8;  // I_min
  int max_iterations = 64; // I_max
  double eps_ref = 1e-4;   // residual scale of the iteration-budget ladder
  Index start = 0;         // first forecast position (1-based); 0 means the default 2m
  bool warm_start = true;  // false: seeded random re-initialization per window
  std::uint64_t seed = 0;
  manifold::CgOptions cg;

  void validate() const;
};

/// What carries over from one window to the next: the final subspace
/// estimate and the final structure residual (which sets the next window's
/// iteration budget).
struct StreamState {
  manifold::SubspaceBasis U_prev;
  double eps_prev = 0.0;
  Index j = 0; // position (1-based) the state was produced at
};

struct ForecastRecord {
  Index position = 0;         // j: predictions target positions j+1 .. j+r
  Vector predictions;         // r values
  double eps_final = 0.0;
  int iterations = 0;         // alternating iterations run for this window
  long inner_iterations = 0;  // CG iterations summed over both steps
  double elapsed_seconds = 0.0;
  bool diverged = false;
};

struct StreamResult {
  std::vector<ForecastRecord> records;
  double mad_overall = 0.0;            // vs realized values where available
  std::vector<double> mad_per_horizon; // r entries, NaN where no truth exists
  long total_inner_iterations = 0;
  double total_seconds = 0.0;
};

/// Window ending at position j (1-based): the last 2m-1 samples padded with
/// r zeros, shaped into an m-by-(m+r) Hankel matrix, plus the mask that
/// declares the padded lower-right corner unobserved.
std::pair<Matrix, structure::ObservationMask> make_window(const Vector& d, Index j,
                                                          Index m, Index r);

/// Iteration budget for the next window: Imin doubled once per octave of
/// eps_prev above eps_ref, clamped to [Imin, Imax]. Monotone in eps_prev,
/// equal to Imin when eps_prev <= eps_ref.
int choose_iterations(double eps_prev, const ForecastConfig& cfg);

/// One window of the online scheme: warm-start from stream.U_prev, run
/// choose_iterations(eps_prev) alternating iterations with Lambda reset to
/// zero, mu fixed, and rho swept geometrically from rho0 to rhoI, then read
/// the last r entries of the projected series as predictions. The window is
/// taken to sit at position stream.j + 1. On divergence the record is
/// flagged and the stream state rolls over unchanged.
std::pair<ForecastRecord, StreamState> forecast_step(const StreamState& stream,
                                                     const Matrix& window,
                                                     const structure::ObservationMask& M,
                                                     const ForecastConfig& cfg);

/// Slide over the whole series: the first window's subspace comes from the
/// SVD of its zero-padded Hankel matrix, later windows warm-start (or
/// re-initialize randomly when warm_start is off). Deviation metrics are
/// computed against realized values where they exist.
StreamResult run_stream(const Vector& d, const ForecastConfig& cfg);

/// First forecast position actually used for a series of length N: the
/// configured start (default 2m), clamped into [2m-1, N] so a series holding
/// exactly one full window still yields one forecast.
Index first_position(const ForecastConfig& cfg, Index N);

struct DeviationSummary {
  double overall = 0.0;
  std::vector<double> per_horizon; // NaN where no realized value exists
};

/// Absolute deviations of the recorded predictions against the realized
/// series, restricted to positions where the truth exists. Diverged records
/// are skipped.
DeviationSummary compute_deviation(const std::vector<ForecastRecord>& records,
                                   const Vector& d, Index r);

} // namespace rslra::forecast
