#include "rslra/batch.hpp"

#include "rslra/datagen.hpp"
#include "test_helpers.hpp"

#include <Eigen/SVD>
#include <doctest.h>

#include <cmath>

using namespace rslra;
using namespace rslra::batch;
using structure::HankelStructure;
using structure::ObservationMask;
using rslra::testing::random_matrix;

namespace {

BatchConfig small_config(Index k) {
  BatchConfig cfg;
  cfg.k = k;
  cfg.max_outer = 64;
  return cfg;
}

} // namespace

TEST_SUITE_BEGIN("batch");

TEST_CASE("schedule_factor basics") {
  CHECK(schedule_factor(0.3, 0.3, 7) == 1.0);
  CHECK(schedule_factor(1.0, 100.0, 3) == doctest::Approx(10.0).epsilon(1e-14));
  CHECK_THROWS_AS(schedule_factor(1.0, 2.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(schedule_factor(-1.0, 2.0, 4), std::invalid_argument);
}

TEST_CASE("schedule_factor round trip hits the endpoint") {
  const double c = schedule_factor(1e-6, 10.0, 16);
  double v = 1e-6;
  for (int i = 0; i < 15; ++i) v *= c;
  CHECK(v == doctest::Approx(10.0).epsilon(1e-12));
}

TEST_CASE("init_state with svd init reproduces a rank-k matrix") {
  const Vector d = datagen::lti_series(4, 23, 5);
  const Matrix X = structure::hankel_build(d, 8);
  auto cfg = small_config(4);
  cfg.init = Init::svd;
  const auto st = init_state(X, ObservationMask::all(X.rows(), X.cols()), cfg);
  CHECK((st.L - X).norm() <= 1e-10 * X.norm());
  CHECK(st.Lambda.norm() == 0.0);
  CHECK(st.mu == cfg.mu0);
  CHECK(st.rho == cfg.rho0);
}

TEST_CASE("init_state random init is deterministic in the seed") {
  const Matrix X = random_matrix(8, 9, 7);
  auto cfg = small_config(3);
  cfg.init = Init::random;
  cfg.seed = 42;
  const auto a = init_state(X, ObservationMask::all(8, 9), cfg);
  const auto b = init_state(X, ObservationMask::all(8, 9), cfg);
  CHECK((a.U.matrix().array() == b.U.matrix().array()).all());
}

TEST_CASE("init_state ignores placeholder values at unobserved entries") {
  const Matrix X = random_matrix(6, 7, 17);
  Matrix junk = X;
  const auto M = structure::forecast_mask(6, 7, 2);
  for (Index j = 0; j < 7; ++j)
    for (Index i = 0; i < 6; ++i)
      if (!M.observed(i, j)) junk(i, j) = 1e9;
  auto cfg = small_config(2);
  Matrix zeroed = M.observed.select(X.array(), 0.0).matrix();
  const auto a = init_state(zeroed, M, cfg);
  const auto b = init_state(junk, M, cfg);
  CHECK((a.L.array() == b.L.array()).all());
  CHECK((a.U.matrix().array() == b.U.matrix().array()).all());
}

TEST_CASE("init_state rejects oversized rank") {
  CHECK_THROWS_AS(init_state(Matrix::Zero(4, 8), ObservationMask::all(4, 8), small_config(4)),
                  std::invalid_argument);
}

TEST_CASE("subspace_step leaves a constant cost landscape untouched") {
  const Index m = 6, n = 7;
  auto cfg = small_config(2);
  auto st = init_state(Matrix::Zero(m, n), ObservationMask::all(m, n), cfg);
  st.L = Matrix::Zero(m, n); // cost is constant in U now
  StepStats stats;
  const auto before = st.U.matrix();
  st = subspace_step(std::move(st), Matrix::Zero(m, n), ObservationMask::all(m, n),
                     HankelStructure{m, n}, cfg, &stats);
  CHECK(stats.inner_iterations == 0);
  CHECK((st.U.matrix().array() == before.array()).all());
}

TEST_CASE("subspace and coordinate steps never increase their costs") {
  const Index m = 8, n = 10, k = 3;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Matrix X = random_matrix(m, n, 400 + seed);
    auto cfg = small_config(k);
    cfg.init = Init::random;
    cfg.seed = seed;
    auto st = init_state(X, ObservationMask::all(m, n), cfg);
    st.Lambda = random_matrix(m, n, 500 + seed) * 0.1;
    st.rho = 0.5;

    StepStats sub, coord;
    st = subspace_step(std::move(st), X, ObservationMask::all(m, n), HankelStructure{m, n}, cfg,
                       &sub);
    CHECK(sub.cost_after <= sub.cost_before);
    CHECK((st.U.matrix().transpose() * st.U.matrix() - Matrix::Identity(k, k)).norm() <= 1e-10);

    st = coordinate_step(std::move(st), X, ObservationMask::all(m, n), HankelStructure{m, n}, cfg,
                         &coord);
    CHECK(coord.cost_after <= coord.cost_before);
    CHECK((st.L - st.U.matrix() * st.Y).norm() <= 1e-12 * (1.0 + st.L.norm()));
    // the coordinate step starts exactly where the subspace step ended
    CHECK(coord.cost_before == doctest::Approx(sub.cost_after).epsilon(1e-12));
  }
}

TEST_CASE("multiplier_update applies the exact formula") {
  const Index m = 5, n = 6;
  auto cfg = small_config(2);
  const Matrix X = random_matrix(m, n, 21);
  auto st = init_state(X, ObservationMask::all(m, n), cfg);
  const HankelStructure S{m, n};

  SUBCASE("Hankel L leaves Lambda untouched") {
    st.L = testing::random_hankel(m, n, 22);
    st = multiplier_update(std::move(st), S, 0.9, 1.1);
    CHECK(st.Lambda.cwiseAbs().maxCoeff() <= 1e-13);
    CHECK(st.eps <= 1e-15);
    CHECK(st.iter == 1);
  }

  SUBCASE("one update from zero gives -rho * residual, two accumulate") {
    const double rho0 = st.rho;
    const Matrix L1 = st.L;
    const Matrix R1 = structure::structure_residual(L1).R;
    st = multiplier_update(std::move(st), S, 1.0, 2.0);
    CHECK((st.Lambda + rho0 * R1).norm() <= 1e-14 * (1.0 + R1.norm()));

    const double rho1 = st.rho;
    CHECK(rho1 == doctest::Approx(2.0 * rho0).epsilon(1e-15));
    st.L = random_matrix(m, n, 23);
    const Matrix R2 = structure::structure_residual(st.L).R;
    st = multiplier_update(std::move(st), S, 1.0, 2.0);
    CHECK((st.Lambda + rho0 * R1 + rho1 * R2).norm() <= 1e-13 * (1.0 + R1.norm() + R2.norm()));
    CHECK(st.iter == 2);
  }
}

TEST_CASE("run_batch recovers a noiseless low-order series") {
  const Index k = 4, m = 12;
  const Vector d = datagen::lti_series(k, 60, 91);
  const Matrix X = structure::hankel_build(d, m);
  BatchConfig cfg;
  cfg.k = k;
  const auto res = run_batch(X, ObservationMask::all(X.rows(), X.cols()), cfg);

  CHECK(res.history.back().eps <= cfg.tau);
  CHECK((res.Lhat - X).norm() <= 1e-3 * X.norm());

  // Lhat is exactly Hankel and numerically rank <= k.
  CHECK_NOTHROW(structure::hankel_extract_series(res.Lhat));
  Eigen::JacobiSVD<Matrix> svd(res.Lhat);
  CHECK(svd.singularValues()(k) <= 1e-6 * svd.singularValues()(0));
}

TEST_CASE("run_batch from a random basis converges over the full schedule") {
  // On noiseless structured data the iterates become near-Hankel long before
  // the data fit tightens, so the eps stop is disabled to let the mu and rho
  // schedules run to their endpoints.
  const Index k = 4, m = 12;
  const Vector d = datagen::lti_series(k, 60, 91);
  const Matrix X = structure::hankel_build(d, m);
  BatchConfig cfg;
  cfg.k = k;
  cfg.init = Init::random;
  cfg.seed = 3;
  cfg.tau = 1e-10;
  const auto res = run_batch(X, ObservationMask::all(X.rows(), X.cols()), cfg);
  CHECK((res.Lhat - X).norm() <= 1e-3 * X.norm());
}

TEST_CASE("run_batch stops immediately on an exact fixed point") {
  const Vector d = datagen::lti_series(3, 30, 17);
  const Matrix X = structure::hankel_build(d, 8);
  BatchConfig cfg;
  cfg.k = 3;
  cfg.init = Init::svd;
  const auto res = run_batch(X, ObservationMask::all(X.rows(), X.cols()), cfg);
  CHECK(res.iterations_used == 1);
  CHECK(res.history.back().eps <= 1e-10);
}

TEST_CASE("run_batch flags outlier positions in Shat") {
  int hit = 0, total = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Index N = 60, m = 12, k = 4;
    const Vector clean = datagen::lti_series(k, N, 700 + seed);
    Rng rng(800 + seed);
    Vector noisy = clean;
    std::vector<Index> outliers;
    for (Index t = 0; t < N; ++t) {
      noisy(t) += 0.01 * rng.gaussian();
      if (rng.uniform() < 0.05) {
        noisy(t) += rng.uniform() < 0.5 ? 0.5 : -0.5;
        outliers.push_back(t);
      }
    }
    if (outliers.empty()) continue;

    const Matrix X = structure::hankel_build(noisy, m);
    BatchConfig cfg;
    cfg.k = k;
    cfg.init = Init::svd;
    const auto res = run_batch(X, ObservationMask::all(X.rows(), X.cols()), cfg);
    // Diagonal averaging of Shat gives the per-sample residual series.
    const Vector s = structure::hankel_extract_series(structure::hankel_project(res.Shat));
    for (Index t : outliers) {
      ++total;
      if (std::abs(s(t)) >= 0.25) ++hit;
    }
  }
  REQUIRE(total > 0);
  CHECK(static_cast<double>(hit) >= 0.8 * static_cast<double>(total));
}

TEST_CASE("run_batch history is deterministic and follows the schedules") {
  const Matrix X = structure::hankel_build(datagen::lti_series(3, 40, 11), 8) +
                   0.05 * random_matrix(8, 33, 12);
  BatchConfig cfg;
  cfg.k = 3;
  cfg.init = Init::random;
  cfg.seed = 9;
  cfg.max_outer = 16;
  cfg.tau = 1e-12; // keep all iterations alive to see both schedule endpoints
  const auto a = run_batch(X, ObservationMask::all(8, 33), cfg);
  const auto b = run_batch(X, ObservationMask::all(8, 33), cfg);

  REQUIRE(a.history.size() == b.history.size());
  for (size_t i = 0; i < a.history.size(); ++i) {
    CHECK(a.history[i].cost == b.history[i].cost);
    CHECK(a.history[i].eps == b.history[i].eps);
    CHECK(a.history[i].inner_iterations == b.history[i].inner_iterations);
  }

  REQUIRE(a.history.size() == 16);
  CHECK(a.history.front().mu == cfg.mu0);
  CHECK(a.history.front().rho == cfg.rho0);
  CHECK(a.history.back().mu == doctest::Approx(cfg.muI).epsilon(1e-12));
  CHECK(a.history.back().rho == doctest::Approx(cfg.rhoI).epsilon(1e-12));
  for (size_t i = 1; i < a.history.size(); ++i) {
    CHECK(a.history[i].mu < a.history[i - 1].mu);
    CHECK(a.history[i].rho > a.history[i - 1].rho);
  }
}

TEST_SUITE_END();
