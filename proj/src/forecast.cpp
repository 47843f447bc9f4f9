#include "rslra/forecast.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

namespace rslra::forecast {

using structure::forecast_mask;
using structure::hankel_build;
using structure::hankel_extract_series;
using structure::hankel_project;
using structure::HankelStructure;
using structure::ObservationMask;
using structure::structure_residual;

void ForecastConfig::validate() const {
  if (k < 1) throw std::invalid_argument("ForecastConfig: need k >= 1");
  if (m < k + 1) throw std::invalid_argument("ForecastConfig: need m >= k + 1");
  if (r < 1) throw std::invalid_argument("ForecastConfig: need r >= 1");
  if (min_iterations < 1 || min_iterations > max_iterations)
    throw std::invalid_argument("ForecastConfig: need 1 <= Imin <= Imax");
  if (!(mu > 0)) throw std::invalid_argument("ForecastConfig: need mu > 0");
  if (!(p > 0 && p < 1)) throw std::invalid_argument("ForecastConfig: need 0 < p < 1");
  if (!(rho0 > 0 && rho0 <= rhoI))
    throw std::invalid_argument("ForecastConfig: need 0 < rho0 <= rhoI");
  if (!(eps_ref > 0)) throw std::invalid_argument("ForecastConfig: need eps_ref > 0");
}

std::pair<Matrix, ObservationMask> make_window(const Vector& d, Index j, Index m, Index r) {
  if (r < 1) throw std::invalid_argument("make_window: need r >= 1");
  const Index hist = 2 * m - 1;
  if (j < hist || j > d.size())
    throw std::invalid_argument("make_window: position " + std::to_string(j) + " needs " +
                                std::to_string(hist) + " samples of history");
  Vector padded = Vector::Zero(hist + r);
  padded.head(hist) = d.segment(j - hist, hist); // samples j-2m+2 .. j, 1-based
  return {hankel_build(padded, m), forecast_mask(m, m + r, r)};
}

int choose_iterations(double eps_prev, const ForecastConfig& cfg) {
  if (eps_prev < 0) throw std::invalid_argument("choose_iterations: need eps_prev >= 0");
  const double ratio = std::max(eps_prev / cfg.eps_ref, 1.0);
  const double doublings = std::ceil(std::log2(ratio));
  const double budget = static_cast<double>(cfg.min_iterations) * std::exp2(doublings);
  if (!(budget < static_cast<double>(cfg.max_iterations))) return cfg.max_iterations;
  return std::max(cfg.min_iterations, static_cast<int>(budget));
}

namespace {

batch::BatchConfig step_config(const ForecastConfig& cfg) {
  batch::BatchConfig bc;
  bc.k = cfg.k;
  bc.p = cfg.p;
  bc.cg = cfg.cg;
  // mu and rho live in the solver state; schedules are applied explicitly.
  bc.mu0 = cfg.mu;
  bc.muI = cfg.mu;
  bc.rho0 = cfg.rho0;
  bc.rhoI = cfg.rhoI;
  return bc;
}

} // namespace

std::pair<ForecastRecord, StreamState> forecast_step(const StreamState& stream,
                                                     const Matrix& window,
                                                     const ObservationMask& M,
                                                     const ForecastConfig& cfg) {
  cfg.validate();
  const Index m = window.rows(), n = window.cols();
  if (stream.U_prev.rows() != m)
    throw std::invalid_argument("forecast_step: carried subspace has wrong dimension");
  const auto started = std::chrono::steady_clock::now();

  const int budget = choose_iterations(stream.eps_prev, cfg);
  const double c_rho = budget >= 2 ? batch::schedule_factor(cfg.rho0, cfg.rhoI, budget) : 1.0;
  const HankelStructure S{m, n};
  const batch::BatchConfig bc = step_config(cfg);

  ForecastRecord rec;
  rec.position = stream.j + 1;
  rec.iterations = budget;

  batch::SolverState state{stream.U_prev,
                           stream.U_prev.matrix().transpose() * window,
                           Matrix(),
                           Matrix::Zero(m, n),
                           cfg.mu,
                           cfg.rho0,
                           0.0,
                           0};
  state.L = state.U.matrix() * state.Y;

  try {
    for (int i = 0; i < budget; ++i) {
      batch::StepStats sub, coord;
      state = batch::subspace_step(std::move(state), window, M, S, bc, &sub);
      state = batch::coordinate_step(std::move(state), window, M, S, bc, &coord);
      state = batch::multiplier_update(std::move(state), S, 1.0, c_rho);
      rec.inner_iterations += sub.inner_iterations + coord.inner_iterations;
    }
    const Vector series = hankel_extract_series(hankel_project(state.L));
    rec.predictions = series.tail(cfg.r);
    rec.eps_final = state.eps;
  } catch (const DivergenceError&) {
    // Flag the record, fall back to carrying the last observation forward,
    // and roll the stream state over unchanged.
    rec.diverged = true;
    rec.predictions = Vector::Constant(cfg.r, window(m - 1, n - cfg.r - 1));
    rec.eps_final = stream.eps_prev;
    rec.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return {std::move(rec), StreamState{stream.U_prev, stream.eps_prev, stream.j + 1}};
  }

  rec.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  StreamState next{state.U, rec.eps_final, stream.j + 1};
  return {std::move(rec), std::move(next)};
}

Index first_position(const ForecastConfig& cfg, Index N) {
  const Index hist = 2 * cfg.m - 1;
  if (N < hist)
    throw std::invalid_argument("run_stream: series of length " + std::to_string(N) +
                                " is shorter than one window (" + std::to_string(hist) + ")");
  Index start = cfg.start > 0 ? cfg.start : 2 * cfg.m;
  return std::min(std::max(start, hist), N);
}

StreamResult run_stream(const Vector& d, const ForecastConfig& cfg) {
  cfg.validate();
  const Index N = d.size();
  const Index j0 = first_position(cfg, N);

  StreamResult out;
  auto [window0, mask0] = make_window(d, j0, cfg.m, cfg.r);
  StreamState stream{manifold::SubspaceBasis::from_svd(window0, cfg.k),
                     std::numeric_limits<double>::infinity(), j0 - 1};

  for (Index j = j0; j <= N; ++j) {
    auto [window, mask] = make_window(d, j, cfg.m, cfg.r);
    if (!cfg.warm_start && j > j0) {
      stream.U_prev = manifold::SubspaceBasis::random(
          cfg.m, cfg.k, cfg.seed ^ (0x9e3779b97f4a7c15ull * static_cast<std::uint64_t>(j)));
    }
    auto [rec, next] = forecast_step(stream, window, mask, cfg);
    out.total_inner_iterations += rec.inner_iterations;
    out.total_seconds += rec.elapsed_seconds;
    out.records.push_back(std::move(rec));
    stream = std::move(next);
  }

  const DeviationSummary dev = compute_deviation(out.records, d, cfg.r);
  out.mad_overall = dev.overall;
  out.mad_per_horizon = dev.per_horizon;
  return out;
}

DeviationSummary compute_deviation(const std::vector<ForecastRecord>& records, const Vector& d,
                                   Index r) {
  DeviationSummary dev;
  dev.per_horizon.assign(r, std::numeric_limits<double>::quiet_NaN());
  Vector sums = Vector::Zero(r);
  Eigen::VectorXi counts = Eigen::VectorXi::Zero(r);
  for (const auto& rec : records) {
    if (rec.diverged) continue;
    for (Index h = 0; h < r && h < rec.predictions.size(); ++h) {
      const Index target = rec.position + h + 1; // 1-based position of the forecast target
      if (target > d.size()) break;
      sums(h) += std::abs(rec.predictions(h) - d(target - 1));
      counts(h) += 1;
    }
  }
  double total = 0.0;
  int total_count = 0;
  for (Index h = 0; h < r; ++h) {
    if (counts(h) > 0) dev.per_horizon[h] = sums(h) / counts(h);
    total += sums(h);
    total_count += counts(h);
  }
  dev.overall = total_count > 0 ? total / total_count : std::numeric_limits<double>::quiet_NaN();
  return dev;
}

} // namespace rslra::forecast
