#include "rslra/forecast.hpp"

#include "rslra/datagen.hpp"
#include "test_helpers.hpp"

#include <doctest.h>

#include <cmath>

using namespace rslra;
using namespace rslra::forecast;

namespace {

ForecastConfig base_config(Index k, Index m, Index r) {
  ForecastConfig cfg;
  cfg.k = k;
  cfg.m = m;
  cfg.r = r;
  cfg.min_iterations = 8;
  cfg.max_iterations = 64;
  return cfg;
}

} // namespace

TEST_SUITE_BEGIN("forecast");

TEST_CASE("make_window pads and masks the future block") {
  Vector d(3);
  d << 5, 6, 7;
  const auto [X, M] = make_window(d, 3, 2, 1);
  REQUIRE(X.rows() == 2);
  REQUIRE(X.cols() == 3);
  CHECK(X(0, 0) == 5);
  CHECK(X(0, 1) == 6);
  CHECK(X(0, 2) == 7);
  CHECK(X(1, 0) == 6);
  CHECK(X(1, 1) == 7);
  CHECK(X(1, 2) == 0);
  CHECK(M.count_observed == 5);
  CHECK_FALSE(M.observed(1, 2));
}

TEST_CASE("make_window masked entry counts follow the anti-diagonal rule") {
  const Vector d = testing::random_vector(30, 3);
  for (Index r : {1, 2, 3}) {
    const auto [X, M] = make_window(d, 20, 5, r);
    CHECK(X.cols() == 5 + r);
    CHECK(M.rows() * M.cols() - M.count_observed == r * (r + 1) / 2);
  }
}

TEST_CASE("make_window rejects r = 0 and short histories") {
  const Vector d = testing::random_vector(10, 5);
  CHECK_THROWS_AS(make_window(d, 9, 5, 0), std::invalid_argument);
  CHECK_THROWS_AS(make_window(d, 8, 5, 1), std::invalid_argument); // needs 2m-1 = 9 samples
  CHECK_NOTHROW(make_window(d, 9, 5, 1));
}

TEST_CASE("choose_iterations ladder") {
  const auto cfg = base_config(2, 6, 1);
  CHECK(choose_iterations(0.0, cfg) == cfg.min_iterations);
  CHECK(choose_iterations(cfg.eps_ref, cfg) == cfg.min_iterations);
  CHECK(choose_iterations(1e6 * cfg.eps_ref, cfg) == cfg.max_iterations);

  int prev = 0;
  for (double e = 1e-6; e < 1.0; e *= 1.35) {
    const int it = choose_iterations(e, cfg);
    CHECK(it >= prev);
    CHECK(it >= cfg.min_iterations);
    CHECK(it <= cfg.max_iterations);
    prev = it;
  }
  CHECK(choose_iterations(2.0 * cfg.eps_ref, cfg) == 2 * cfg.min_iterations);
}

TEST_CASE("forecast_step extends a constant series") {
  const Index m = 4, r = 2;
  const Vector d = Vector::Constant(2 * m - 1, 3.0);
  auto cfg = base_config(1, m, r);
  const auto [window, mask] = make_window(d, d.size(), m, r);
  StreamState stream{manifold::SubspaceBasis::from_svd(window, 1),
                     std::numeric_limits<double>::infinity(), d.size() - 1};
  const auto [rec, next] = forecast_step(stream, window, mask, cfg);
  REQUIRE(rec.predictions.size() == r);
  CHECK(rec.predictions(0) == doctest::Approx(3.0).epsilon(1e-6));
  CHECK(rec.predictions(1) == doctest::Approx(3.0).epsilon(1e-6));
  CHECK(next.j == stream.j + 1);
  CHECK(rec.iterations == cfg.max_iterations); // infinite eps_prev maxes the budget
}

TEST_CASE("run_stream tracks a pure exponential") {
  const Index m = 6, r = 2, N = 30;
  Vector d(N);
  for (Index t = 0; t < N; ++t) d(t) = std::pow(0.95, static_cast<double>(t + 1));
  auto cfg = base_config(1, m, r);
  cfg.max_iterations = 128;
  const auto res = run_stream(d, cfg);
  REQUIRE(!res.records.empty());
  for (const auto& rec : res.records) {
    for (Index h = 0; h < r; ++h) {
      const double truth = std::pow(0.95, static_cast<double>(rec.position + h + 1));
      CHECK(std::abs(rec.predictions(h) - truth) <= 1e-3 * truth);
    }
  }
}

TEST_CASE("run_stream tracks a sinusoid") {
  const Index m = 10, r = 3, N = 60;
  Vector d(N);
  for (Index t = 0; t < N; ++t) d(t) = std::sin(0.3 * static_cast<double>(t + 1));
  auto cfg = base_config(2, m, r);
  cfg.max_iterations = 128;
  const auto res = run_stream(d, cfg);
  CHECK(res.mad_overall <= 1e-2);
}

TEST_CASE("run_stream follows an order-k recurrence with m >= 2k") {
  const Index k = 4, m = 8, r = 3;
  const Vector d = datagen::lti_series(k, 80, 33);
  auto cfg = base_config(k, m, r);
  cfg.max_iterations = 128;
  const auto res = run_stream(d, cfg);
  const double scale = d.cwiseAbs().maxCoeff();
  CHECK(res.mad_overall <= 1e-2 * scale);
}

TEST_CASE("run_stream boundary: one full window yields one record") {
  const Index m = 4;
  const Vector d = testing::random_vector(2 * m - 1, 21);
  auto cfg = base_config(1, m, 1);
  const auto res = run_stream(d, cfg);
  CHECK(res.records.size() == 1);
  CHECK(res.records.front().position == 2 * m - 1);
  // No realized values beyond the end: overall deviation is undefined.
  CHECK(std::isnan(res.mad_overall));
}

TEST_CASE("run_stream honors the configured start position") {
  const Vector d = datagen::lti_series(2, 40, 41);
  auto cfg = base_config(2, 6, 1);
  const auto res = run_stream(d, cfg);
  CHECK(res.records.front().position == 2 * cfg.m); // paper default
  cfg.start = 15;
  const auto shifted = run_stream(d, cfg);
  CHECK(shifted.records.front().position == 15);
}

TEST_CASE("run_stream is deterministic") {
  Vector d = datagen::lti_series(2, 36, 51);
  Rng rng(52);
  for (Index t = 0; t < d.size(); ++t) d(t) += 0.01 * rng.gaussian();
  auto cfg = base_config(2, 6, 2);
  const auto a = run_stream(d, cfg);
  const auto b = run_stream(d, cfg);
  REQUIRE(a.records.size() == b.records.size());
  for (size_t i = 0; i < a.records.size(); ++i) {
    CHECK((a.records[i].predictions.array() == b.records[i].predictions.array()).all());
    CHECK(a.records[i].eps_final == b.records[i].eps_final);
    CHECK(a.records[i].iterations == b.records[i].iterations);
    CHECK(a.records[i].inner_iterations == b.records[i].inner_iterations);
  }
}

TEST_CASE("compute_deviation counts only realized targets") {
  std::vector<ForecastRecord> records(1);
  records[0].position = 5;
  records[0].predictions = Vector::Zero(3);
  Vector d = Vector::Zero(6); // only position 6 realized
  d(5) = 2.0;
  const auto dev = compute_deviation(records, d, 3);
  CHECK(dev.overall == doctest::Approx(2.0));
  CHECK(dev.per_horizon[0] == doctest::Approx(2.0));
  CHECK(std::isnan(dev.per_horizon[1]));
  CHECK(std::isnan(dev.per_horizon[2]));
}

TEST_SUITE_END();
