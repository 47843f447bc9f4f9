#pragma once

#include "rslra/forecast.hpp"
#include "rslra/types.hpp"

#include <json.hpp>

#include <optional>
#include <string>

namespace rslra::io {

/// Everything a forecasting run needs to be reproduced and judged: the fully
/// materialized configuration, the per-step records, the deviation summary
/// and the wall-clock totals. Metrics always refer to the (possibly
/// normalized) scale the solver ran on.
struct RunReport {
  nlohmann::json config; // effective configuration, defaults materialized
  forecast::StreamResult result;
  bool normalized = false;
  double norm_min = 0.0;
  double norm_max = 1.0;
  std::string input_name;
};

nlohmann::json forecast_config_to_json(const forecast::ForecastConfig& cfg);

/// Serializes the report. With include_timing = false all wall-clock fields
/// are dropped, which yields a byte-stable representation for runs with
/// identical seeds and configuration.
nlohmann::json report_to_json(const RunReport& report, bool include_timing = true);

} // namespace rslra::io
