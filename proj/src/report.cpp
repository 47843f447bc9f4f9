#include "rslra/report.hpp"

namespace rslra::io {

using nlohmann::json;

json forecast_config_to_json(const forecast::ForecastConfig& cfg) {
  return json{{"k", cfg.k},
              {"m", cfg.m},
              {"r", cfg.r},
              {"mu", cfg.mu},
              {"p", cfg.p},
              {"rho0", cfg.rho0},
              {"rhoI", cfg.rhoI},
              {"min_iterations", cfg.min_iterations},
              {"max_iterations", cfg.max_iterations},
              {"eps_ref", cfg.eps_ref},
              {"start", cfg.start},
              {"warm_start", cfg.warm_start},
              {"seed", cfg.seed},
              {"cg",
               {{"max_iterations", cfg.cg.max_iterations},
                {"grad_tol_rel", cfg.cg.grad_tol_rel},
                {"grad_tol_abs", cfg.cg.grad_tol_abs},
                {"initial_step", cfg.cg.line_search.initial_step},
                {"armijo_c1", cfg.cg.line_search.armijo_c1},
                {"max_halvings", cfg.cg.line_search.max_halvings}}}};
}

json report_to_json(const RunReport& report, bool include_timing) {
  json steps = json::array();
  for (const auto& rec : report.result.records) {
    json step{{"position", rec.position},
              {"predictions", std::vector<double>(rec.predictions.begin(), rec.predictions.end())},
              {"eps_final", rec.eps_final},
              {"iterations", rec.iterations},
              {"inner_iterations", rec.inner_iterations},
              {"diverged", rec.diverged}};
    if (include_timing) step["elapsed_seconds"] = rec.elapsed_seconds;
    steps.push_back(std::move(step));
  }

  json per_horizon = json::array();
  for (double v : report.result.mad_per_horizon) {
    if (std::isfinite(v))
      per_horizon.push_back(v);
    else
      per_horizon.push_back(nullptr);
  }

  json doc{{"config", report.config},
           {"input", report.input_name},
           {"normalized", report.normalized},
           {"steps", std::move(steps)},
           {"summary",
            {{"mean_absolute_deviation", report.result.mad_overall},
             {"mean_absolute_deviation_per_horizon", std::move(per_horizon)},
             {"total_inner_iterations", report.result.total_inner_iterations},
             {"steps_recorded", report.result.records.size()}}}};
  if (report.normalized) {
    doc["normalization"] = {{"min", report.norm_min}, {"max", report.norm_max}};
  }
  if (include_timing) doc["summary"]["total_seconds"] = report.result.total_seconds;
  return doc;
}

} // namespace rslra::io
