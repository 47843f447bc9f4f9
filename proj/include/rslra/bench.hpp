#pragma once

#include "rslra/baselines.hpp"
#include "rslra/forecast.hpp"
#include "rslra/types.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace rslra::io {

/// One forecasting method's results over a shared set of window positions.
struct BenchMethod {
  std::string name;
  std::vector<forecast::ForecastRecord> records;
  forecast::DeviationSummary vs_realized;
  std::optional<forecast::DeviationSummary> vs_clean;
  double seconds = 0.0;
  long total_inner_iterations = 0;
};

struct BenchReport {
  std::vector<BenchMethod> methods;
  nlohmann::json config;
};

/// Runs the robust forecaster head-to-head against the Cadzow l2 completion
/// and a single-pass truncation baseline over identical windows. Deviations
/// are reported against the realized series and, when available, against the
/// noise-free truth.
BenchReport run_bench(const Vector& d, const std::optional<Vector>& clean,
                      const forecast::ForecastConfig& cfg,
                      const baselines::BaselineConfig& bcfg = {});

nlohmann::json bench_to_json(const BenchReport& report);

/// Comparison table: one row per method and horizon step.
void bench_to_csv(const std::string& path, const BenchReport& report);

} // namespace rslra::io
