// Command-line front end: robust structured low-rank decomposition (`batch`),
// online forecasting (`forecast`), synthetic data generation (`simulate`) and
// baseline comparisons (`bench`).

#include "rslra/baselines.hpp"
#include "rslra/batch.hpp"
#include "rslra/bench.hpp"
#include "rslra/datagen.hpp"
#include "rslra/forecast.hpp"
#include "rslra/report.hpp"
#include "rslra/series_io.hpp"
#include "rslra/structure.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace {

using namespace rslra;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitDiverged = 3;

void write_json(const std::string& path, const json& doc) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path + "'");
  out << doc.dump(2) << "\n";
}

json batch_config_to_json(const batch::BatchConfig& cfg) {
  return json{{"k", cfg.k},
              {"mu0", cfg.mu0},
              {"muI", cfg.muI},
              {"rho0", cfg.rho0},
              {"rhoI", cfg.rhoI},
              {"p", cfg.p},
              {"max_outer", cfg.max_outer},
              {"tau", cfg.tau},
              {"init", cfg.init == batch::Init::svd ? "svd" : "random"},
              {"seed", cfg.seed}};
}

// --- batch ------------------------------------------------------------

struct BatchArgs {
  std::string input, column = "0", matrix, mask;
  Index m = 0;
  Index holdout_r = 0;
  std::string out = "batch";
  batch::BatchConfig cfg;
  std::string init = "svd";
  bool seed_set = false;
};

int run_batch_cmd(BatchArgs& args) {
  Matrix X;
  if (!args.matrix.empty()) {
    X = io::load_matrix_csv(args.matrix);
  } else {
    if (args.m < 1) throw std::invalid_argument("batch: --m is required with --input");
    const auto sf = io::load_series_csv(args.input, args.column);
    X = structure::hankel_build(sf.values, args.m);
  }

  structure::ObservationMask mask = structure::ObservationMask::all(X.rows(), X.cols());
  if (!args.mask.empty()) {
    const Matrix M = io::load_matrix_csv(args.mask);
    if (M.rows() != X.rows() || M.cols() != X.cols())
      throw std::invalid_argument("batch: mask shape does not match the data matrix");
    mask = structure::ObservationMask::from_array(M.array() != 0.0);
  } else if (args.holdout_r > 0) {
    mask = structure::forecast_mask(X.rows(), X.cols(), args.holdout_r);
  }

  args.cfg.init = args.init == "random" ? batch::Init::random : batch::Init::svd;
  if (args.cfg.init == batch::Init::random && !args.seed_set)
    throw std::invalid_argument("batch: --seed is required with --init random");

  const auto res = batch::run_batch(X, mask, args.cfg);

  io::save_matrix_csv(args.out + "_lhat.csv", res.Lhat);
  io::save_matrix_csv(args.out + "_shat.csv", res.Shat);
  io::save_series_csv(args.out + "_series.csv", structure::hankel_extract_series(res.Lhat));

  json history = json::array();
  for (const auto& h : res.history)
    history.push_back({{"iter", h.iter},
                       {"cost", h.cost},
                       {"eps", h.eps},
                       {"mu", h.mu},
                       {"rho", h.rho},
                       {"inner_iterations", h.inner_iterations}});
  write_json(args.out + "_report.json",
             json{{"config", batch_config_to_json(args.cfg)},
                  {"rows", X.rows()},
                  {"cols", X.cols()},
                  {"observed", mask.count_observed},
                  {"iterations_used", res.iterations_used},
                  {"final_eps", res.history.empty() ? 0.0 : res.history.back().eps},
                  {"history", std::move(history)}});
  std::cout << "batch: " << res.iterations_used << " iterations, final eps "
            << (res.history.empty() ? 0.0 : res.history.back().eps) << "\n";
  return kExitOk;
}

// --- forecast ---------------------------------------------------------

struct ForecastArgs {
  std::string input, column = "0";
  std::string out = "forecast";
  forecast::ForecastConfig cfg;
  bool normalize = true;
  bool cold_start = false;
  bool seed_set = false;
};

int run_forecast_cmd(ForecastArgs& args) {
  const auto sf = io::load_series_csv(args.input, args.column);

  Vector series = sf.values;
  io::RunReport report;
  report.input_name = args.input;
  if (args.normalize) {
    const auto norm = io::normalize_unit(series);
    series = norm.values;
    report.normalized = true;
    report.norm_min = norm.min;
    report.norm_max = norm.max;
  }

  args.cfg.warm_start = !args.cold_start;
  if (args.cold_start && !args.seed_set)
    throw std::invalid_argument("forecast: --seed is required with --cold-start");

  report.config = io::forecast_config_to_json(args.cfg);
  report.result = forecast::run_stream(series, args.cfg);

  // per-step CSV in original units
  {
    std::ofstream out(args.out + "_forecast.csv");
    if (!out) throw DataError("cannot write '" + args.out + "_forecast.csv'");
    out << "position";
    for (Index h = 1; h <= args.cfg.r; ++h) out << ",h" << h;
    out << "\n";
    char buf[40];
    for (const auto& rec : report.result.records) {
      out << rec.position;
      for (Index h = 0; h < rec.predictions.size(); ++h) {
        const double v = report.normalized
                             ? rec.predictions(h) * (report.norm_max - report.norm_min) +
                                   report.norm_min
                             : rec.predictions(h);
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        out << "," << buf;
      }
      out << "\n";
    }
  }

  write_json(args.out + "_report.json", io::report_to_json(report));
  std::cout << "forecast: " << report.result.records.size() << " steps, overall MAD "
            << report.result.mad_overall << (report.normalized ? " (normalized units)" : "")
            << "\n";
  return kExitOk;
}

// --- simulate ---------------------------------------------------------

struct SimulateArgs {
  datagen::LTVSpec spec;
  std::string out = "sim";
};

int run_simulate_cmd(const SimulateArgs& args) {
  const auto data = datagen::ltv_impulse_response(args.spec);
  io::save_series_csv(args.out + "_clean.csv", data.clean);
  io::save_series_csv(args.out + "_noisy.csv", data.noisy);
  Vector mask(data.outlier_mask.size());
  for (size_t i = 0; i < data.outlier_mask.size(); ++i) mask(i) = data.outlier_mask[i] ? 1 : 0;
  io::save_series_csv(args.out + "_outliers.csv", mask);
  std::cout << "simulate: wrote " << data.clean.size() << " samples to " << args.out
            << "_{clean,noisy,outliers}.csv\n";
  return kExitOk;
}

// --- bench ------------------------------------------------------------

struct BenchArgs {
  std::string input, column = "0";
  bool simulate = false;
  datagen::LTVSpec spec;
  bool seed_set = false;
  bool normalize = false;
  std::string out = "bench";
  forecast::ForecastConfig cfg;
  baselines::BaselineConfig bcfg;
  bool cold_start = false;
};

int run_bench_cmd(BenchArgs& args) {
  Vector series;
  std::optional<Vector> clean;
  if (args.simulate) {
    if (!args.seed_set) throw std::invalid_argument("bench: --seed is required with --simulate");
    const auto data = datagen::ltv_impulse_response(args.spec);
    series = data.noisy;
    clean = data.clean;
  } else {
    if (args.input.empty())
      throw std::invalid_argument("bench: either --input or --simulate is required");
    series = io::load_series_csv(args.input, args.column).values;
  }
  if (args.normalize) {
    const auto norm = io::normalize_unit(series);
    series = norm.values;
    if (clean) clean = ((clean->array() - norm.min) / (norm.max - norm.min)).matrix().eval();
  }
  args.cfg.warm_start = !args.cold_start;

  const auto report = io::run_bench(series, clean, args.cfg, args.bcfg);
  io::bench_to_csv(args.out + "_bench.csv", report);
  write_json(args.out + "_bench.json", io::bench_to_json(report));
  for (const auto& method : report.methods) {
    std::cout << method.name << ": MAD " << method.vs_realized.overall;
    if (method.vs_clean) std::cout << " (vs clean " << method.vs_clean->overall << ")";
    std::cout << " in " << method.seconds << "s\n";
  }
  return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robust structured low-rank approximation and online time-series forecasting"};
  app.require_subcommand(1);

  BatchArgs batch_args;
  auto* cmd_batch = app.add_subcommand(
      "batch", "Robust Hankel low-rank decomposition of a series or matrix");
  cmd_batch->add_option("--input", batch_args.input, "series CSV (one value per row)");
  cmd_batch->add_option("--column", batch_args.column, "column index or header name");
  cmd_batch->add_option("--matrix", batch_args.matrix, "matrix CSV instead of a series");
  cmd_batch->add_option("--m", batch_args.m, "Hankel row count when building from a series");
  cmd_batch->add_option("--mask", batch_args.mask, "0/1 observation mask CSV");
  cmd_batch->add_option("--holdout-r", batch_args.holdout_r,
                        "treat the last R anti-diagonals as unobserved");
  cmd_batch->add_option("--k", batch_args.cfg.k, "rank bound")->required();
  cmd_batch->add_option("--mu0", batch_args.cfg.mu0, "smoothing schedule start");
  cmd_batch->add_option("--muI", batch_args.cfg.muI, "smoothing schedule end");
  cmd_batch->add_option("--rho0", batch_args.cfg.rho0, "penalty schedule start");
  cmd_batch->add_option("--rhoI", batch_args.cfg.rhoI, "penalty schedule end");
  cmd_batch->add_option("--p", batch_args.cfg.p, "lp exponent in (0,1)");
  cmd_batch->add_option("--iters", batch_args.cfg.max_outer, "outer iteration budget");
  cmd_batch->add_option("--tau", batch_args.cfg.tau, "early-stop threshold on eps");
  cmd_batch->add_option("--init", batch_args.init, "svd | random")
      ->check(CLI::IsMember({"svd", "random"}));
  cmd_batch->add_option("--seed", batch_args.cfg.seed, "seed for --init random")
      ->each([&](const std::string&) { batch_args.seed_set = true; });
  cmd_batch->add_option("--out", batch_args.out, "output file prefix");

  ForecastArgs fc_args;
  auto* cmd_forecast =
      app.add_subcommand("forecast", "Online r-step-ahead forecasting over a sliding window");
  cmd_forecast->add_option("--input", fc_args.input, "series CSV")->required();
  cmd_forecast->add_option("--column", fc_args.column, "column index or header name");
  cmd_forecast->add_option("--k", fc_args.cfg.k, "rank bound (system order)")->required();
  cmd_forecast->add_option("--m", fc_args.cfg.m, "analysis dimension")->required();
  cmd_forecast->add_option("--r", fc_args.cfg.r, "forecast range")->required();
  cmd_forecast->add_option("--mu", fc_args.cfg.mu, "fixed smoothing parameter");
  cmd_forecast->add_option("--p", fc_args.cfg.p, "lp exponent in (0,1)");
  cmd_forecast->add_option("--rho0", fc_args.cfg.rho0, "penalty schedule start");
  cmd_forecast->add_option("--rhoI", fc_args.cfg.rhoI, "penalty schedule end");
  cmd_forecast->add_option("--imin", fc_args.cfg.min_iterations, "minimum iterations per window");
  cmd_forecast->add_option("--imax", fc_args.cfg.max_iterations, "maximum iterations per window");
  cmd_forecast->add_option("--eps-ref", fc_args.cfg.eps_ref,
                           "residual scale of the iteration budget ladder");
  cmd_forecast->add_option("--start", fc_args.cfg.start, "first forecast position (1-based)");
  cmd_forecast->add_flag("--cold-start", fc_args.cold_start,
                         "random re-initialization per window (needs --seed)");
  cmd_forecast->add_option("--seed", fc_args.cfg.seed, "seed for --cold-start")
      ->each([&](const std::string&) { fc_args.seed_set = true; });
  cmd_forecast->add_flag("--normalize,!--no-normalize", fc_args.normalize,
                         "affinely map the series onto [0,1] before solving (default on)");
  cmd_forecast->add_option("--out", fc_args.out, "output file prefix");

  SimulateArgs sim_args;
  auto* cmd_simulate = app.add_subcommand(
      "simulate", "Impulse response of a noisy time-varying system with sparse outliers");
  cmd_simulate->add_option("--k", sim_args.spec.k, "state dimension");
  cmd_simulate->add_option("--n", sim_args.spec.N, "sample count");
  cmd_simulate->add_option("--drift", sim_args.spec.drift, "time-variation rate");
  cmd_simulate->add_option("--sigma", sim_args.spec.sigma, "gaussian noise std");
  cmd_simulate->add_option("--sp-rate", sim_args.spec.sp_rate, "outlier probability");
  cmd_simulate->add_option("--sp-amp", sim_args.spec.sp_amp, "outlier magnitude");
  cmd_simulate->add_option("--seed", sim_args.spec.seed, "rng seed")->required();
  cmd_simulate->add_option("--out", sim_args.out, "output file prefix");

  BenchArgs bench_args;
  auto* cmd_bench = app.add_subcommand(
      "bench", "Robust forecaster vs cadzow and single-pass truncation baselines");
  cmd_bench->add_option("--input", bench_args.input, "series CSV");
  cmd_bench->add_option("--column", bench_args.column, "column index or header name");
  cmd_bench->add_flag("--simulate", bench_args.simulate, "benchmark on a fresh simulation");
  cmd_bench->add_option("--sim-k", bench_args.spec.k, "simulation state dimension");
  cmd_bench->add_option("--sim-n", bench_args.spec.N, "simulation sample count");
  cmd_bench->add_option("--drift", bench_args.spec.drift, "simulation time-variation rate");
  cmd_bench->add_option("--sigma", bench_args.spec.sigma, "simulation gaussian noise std");
  cmd_bench->add_option("--sp-rate", bench_args.spec.sp_rate, "simulation outlier probability");
  cmd_bench->add_option("--sp-amp", bench_args.spec.sp_amp, "simulation outlier magnitude");
  cmd_bench->add_option("--seed", bench_args.spec.seed, "simulation seed")
      ->each([&](const std::string&) { bench_args.seed_set = true; });
  cmd_bench->add_flag("--normalize", bench_args.normalize, "map the series onto [0,1] first");
  cmd_bench->add_option("--k", bench_args.cfg.k, "rank bound")->required();
  cmd_bench->add_option("--m", bench_args.cfg.m, "analysis dimension")->required();
  cmd_bench->add_option("--r", bench_args.cfg.r, "forecast range")->required();
  cmd_bench->add_option("--mu", bench_args.cfg.mu, "fixed smoothing parameter");
  cmd_bench->add_option("--p", bench_args.cfg.p, "lp exponent in (0,1)");
  cmd_bench->add_option("--rho0", bench_args.cfg.rho0, "penalty schedule start");
  cmd_bench->add_option("--rhoI", bench_args.cfg.rhoI, "penalty schedule end");
  cmd_bench->add_option("--imin", bench_args.cfg.min_iterations, "minimum iterations per window");
  cmd_bench->add_option("--imax", bench_args.cfg.max_iterations, "maximum iterations per window");
  cmd_bench->add_option("--eps-ref", bench_args.cfg.eps_ref, "iteration budget ladder scale");
  cmd_bench->add_flag("--cold-start", bench_args.cold_start, "disable the warm start");
  cmd_bench->add_option("--cadzow-iters", bench_args.bcfg.max_iters, "cadzow iteration cap");
  cmd_bench->add_option("--cadzow-tol", bench_args.bcfg.tol, "cadzow relative change tolerance");
  cmd_bench->add_option("--out", bench_args.out, "output file prefix");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (cmd_batch->parsed()) return run_batch_cmd(batch_args);
    if (cmd_forecast->parsed()) return run_forecast_cmd(fc_args);
    if (cmd_simulate->parsed()) return run_simulate_cmd(sim_args);
    if (cmd_bench->parsed()) return run_bench_cmd(bench_args);
  } catch (const DivergenceError& e) {
    std::cerr << "solver diverged: " << e.what() << "\n";
    return kExitDiverged;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
