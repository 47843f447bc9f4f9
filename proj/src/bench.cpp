#include "rslra/bench.hpp"

#include "rslra/report.hpp"
#include "rslra/structure.hpp"

#include <chrono>
#include <cmath>
#include <fstream>

namespace rslra::io {

using nlohmann::json;

namespace {

// Runs one of the classical per-window baselines over the same positions the
// robust forecaster uses.
template <typename WindowForecast>
BenchMethod run_baseline(const std::string& name, const Vector& d,
                         const forecast::ForecastConfig& cfg, WindowForecast&& predict) {
  BenchMethod method;
  method.name = name;
  const Index hist = 2 * cfg.m - 1;
  const Index j0 = forecast::first_position(cfg, d.size());
  for (Index j = j0; j <= d.size(); ++j) {
    const auto started = std::chrono::steady_clock::now();
    forecast::ForecastRecord rec;
    rec.position = j;
    rec.predictions = predict(d.segment(j - hist, hist).eval());
    rec.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    method.seconds += rec.elapsed_seconds;
    method.records.push_back(std::move(rec));
  }
  return method;
}

} // namespace

BenchReport run_bench(const Vector& d, const std::optional<Vector>& clean,
                      const forecast::ForecastConfig& cfg, const baselines::BaselineConfig& bcfg) {
  cfg.validate();
  BenchReport report;
  report.config = forecast_config_to_json(cfg);
  report.config["cadzow_max_iters"] = bcfg.max_iters;
  report.config["cadzow_tol"] = bcfg.tol;

  {
    BenchMethod robust;
    robust.name = "robust";
    forecast::StreamResult res = forecast::run_stream(d, cfg);
    robust.seconds = res.total_seconds;
    robust.total_inner_iterations = res.total_inner_iterations;
    robust.vs_realized = {res.mad_overall, res.mad_per_horizon};
    robust.records = std::move(res.records);
    report.methods.push_back(std::move(robust));
  }

  report.methods.push_back(run_baseline("cadzow", d, cfg, [&](const Vector& window) {
    return baselines::cadzow_forecast(window, cfg.m, cfg.k, cfg.r, bcfg).predictions;
  }));

  report.methods.push_back(run_baseline("ssa", d, cfg, [&](const Vector& window) {
    Vector padded = Vector::Zero(window.size() + cfg.r);
    padded.head(window.size()) = window;
    const Matrix X = structure::hankel_build(padded, cfg.m);
    return structure::hankel_extract_series(
               structure::hankel_project(baselines::svd_truncate(X, cfg.k)))
        .tail(cfg.r)
        .eval();
  }));

  for (auto& method : report.methods) {
    if (method.name != "robust")
      method.vs_realized = forecast::compute_deviation(method.records, d, cfg.r);
    if (clean) method.vs_clean = forecast::compute_deviation(method.records, *clean, cfg.r);
  }
  return report;
}

json bench_to_json(const BenchReport& report) {
  json methods = json::array();
  for (const auto& m : report.methods) {
    json entry{{"name", m.name},
               {"mad_vs_realized", m.vs_realized.overall},
               {"seconds", m.seconds},
               {"windows", m.records.size()}};
    if (m.vs_clean) entry["mad_vs_clean"] = m.vs_clean->overall;
    if (m.total_inner_iterations > 0) entry["total_inner_iterations"] = m.total_inner_iterations;
    json per_h = json::array();
    for (double v : m.vs_realized.per_horizon)
      per_h.push_back(std::isfinite(v) ? json(v) : json(nullptr));
    entry["mad_per_horizon"] = std::move(per_h);
    methods.push_back(std::move(entry));
  }
  return json{{"config", report.config}, {"methods", std::move(methods)}};
}

void bench_to_csv(const std::string& path, const BenchReport& report) {
  std::ofstream out(path);
  if (!out) throw DataError("bench_to_csv: cannot write '" + path + "'");
  out << "method,horizon,mad_vs_realized,mad_vs_clean,seconds\n";
  char buf[64];
  auto fmt = [&](double v) {
    if (!std::isfinite(v)) return std::string();
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
  };
  for (const auto& m : report.methods) {
    out << m.name << ",overall," << fmt(m.vs_realized.overall) << ","
        << fmt(m.vs_clean ? m.vs_clean->overall : std::nan("")) << "," << fmt(m.seconds) << "\n";
    for (size_t h = 0; h < m.vs_realized.per_horizon.size(); ++h) {
      const double vc = m.vs_clean && h < m.vs_clean->per_horizon.size()
                            ? m.vs_clean->per_horizon[h]
                            : std::nan("");
      out << m.name << "," << (h + 1) << "," << fmt(m.vs_realized.per_horizon[h]) << ","
          << fmt(vc) << ",\n";
    }
  }
}

} // namespace rslra::io
