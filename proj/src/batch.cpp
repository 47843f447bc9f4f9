#include "rslra/batch.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace rslra::batch {

using objective::LagrangianParams;
using objective::SmoothingParams;
using structure::hankel_project;
using structure::HankelStructure;
using structure::mask_residual;
using structure::ObservationMask;
using structure::structure_residual;

void BatchConfig::validate() const {
  if (k < 1) throw std::invalid_argument("BatchConfig: need k >= 1");
  if (!(mu0 >= muI && muI > 0))
    throw std::invalid_argument("BatchConfig: need mu0 >= muI > 0");
  if (!(rho0 > 0 && rho0 <= rhoI))
    throw std::invalid_argument("BatchConfig: need 0 < rho0 <= rhoI");
  if (max_outer < 2) throw std::invalid_argument("BatchConfig: need at least 2 outer iterations");
  if (!(tau > 0)) throw std::invalid_argument("BatchConfig: need tau > 0");
  SmoothingParams{mu0, p}.validate();
}

double schedule_factor(double v0, double vI, int iters) {
  if (!(v0 > 0) || !(vI > 0))
    throw std::invalid_argument("schedule_factor: endpoints must be positive");
  if (iters < 2) throw std::invalid_argument("schedule_factor: need at least 2 iterations");
  return std::pow(vI / v0, 1.0 / (iters - 1));
}

SolverState init_state(const Matrix& Xhat, const ObservationMask& M, const BatchConfig& cfg) {
  cfg.validate();
  const Index m = Xhat.rows(), n = Xhat.cols();
  if (Xhat.rows() != M.rows() || Xhat.cols() != M.cols())
    throw std::invalid_argument("init_state: mask shape does not match the data");
  if (cfg.k >= std::min(m, n))
    throw std::invalid_argument("init_state: rank bound k=" + std::to_string(cfg.k) +
                                " too large for a " + std::to_string(m) + "x" +
                                std::to_string(n) + " problem");
  M.validate();

  const Matrix X0 = M.observed.select(Xhat.array(), 0.0).matrix();
  manifold::SubspaceBasis U = cfg.init == Init::svd
                                  ? manifold::SubspaceBasis::from_svd(X0, cfg.k)
                                  : manifold::SubspaceBasis::random(m, cfg.k, cfg.seed);
  Matrix Y = U.matrix().transpose() * X0;
  Matrix L = U.matrix() * Y;
  const double eps = structure_residual(L).eps;
  return SolverState{std::move(U), std::move(Y), std::move(L),
                     Matrix::Zero(m, n),  cfg.mu0,     cfg.rho0,
                     eps,                 0};
}

SolverState subspace_step(SolverState state, const Matrix& Xhat, const ObservationMask& M,
                          const HankelStructure& S, const BatchConfig& cfg, StepStats* stats) {
  const SmoothingParams sp{state.mu, cfg.p};
  const LagrangianParams lp{state.Lambda, state.rho};
  const Matrix& L = state.L;

  auto f = [&](const manifold::SubspaceBasis& U) {
    return objective::subspace_cost(U, L, Xhat, M, lp, sp, S);
  };
  auto g = [&](const manifold::SubspaceBasis& U) {
    return objective::subspace_cost_grad(U, L, Xhat, M, lp, sp, S);
  };

  auto res = manifold::cg_minimize_stiefel(f, g, state.U, cfg.cg);
  if (stats) {
    stats->inner_iterations = res.stats.iterations;
    stats->cost_before = res.stats.cost_history.front();
    stats->cost_after = res.stats.final_cost;
  }
  state.U = std::move(res.minimizer);
  return state;
}

SolverState coordinate_step(SolverState state, const Matrix& Xhat, const ObservationMask& M,
                            const HankelStructure& S, const BatchConfig& cfg, StepStats* stats) {
  const SmoothingParams sp{state.mu, cfg.p};
  const LagrangianParams lp{state.Lambda, state.rho};
  const manifold::SubspaceBasis& U = state.U;

  auto f = [&](const Matrix& Y) {
    return objective::coordinate_cost(Y, U, Xhat, M, lp, sp, S);
  };
  auto g = [&](const Matrix& Y) {
    return objective::coordinate_cost_grad(Y, U, Xhat, M, lp, sp, S);
  };

  // Start from the projection of the previous iterate onto the new subspace;
  // the starting cost then equals the subspace step's final cost.
  const Matrix Y0 = U.matrix().transpose() * state.L;
  auto res = manifold::cg_minimize_euclidean(f, g, Y0, cfg.cg);
  if (stats) {
    stats->inner_iterations = res.stats.iterations;
    stats->cost_before = res.stats.cost_history.front();
    stats->cost_after = res.stats.final_cost;
  }
  state.Y = std::move(res.minimizer);
  state.L = U.matrix() * state.Y;
  return state;
}

SolverState multiplier_update(SolverState state, const HankelStructure&, double c_mu,
                              double c_rho) {
  const auto res = structure_residual(state.L);
  state.Lambda -= state.rho * res.R;
  state.eps = res.eps;
  state.mu *= c_mu;
  state.rho *= c_rho;
  state.iter += 1;
  return state;
}

BatchResult run_batch(const Matrix& Xhat, const ObservationMask& M, const BatchConfig& cfg) {
  cfg.validate();
  const HankelStructure S{Xhat.rows(), Xhat.cols()};
  const double c_mu = schedule_factor(cfg.mu0, cfg.muI, cfg.max_outer);
  const double c_rho = schedule_factor(cfg.rho0, cfg.rhoI, cfg.max_outer);
  const Matrix X0 = M.observed.select(Xhat.array(), 0.0).matrix();

  SolverState state = init_state(Xhat, M, cfg);
  std::vector<IterationRecord> history;
  history.reserve(cfg.max_outer);

  try {
    for (int i = 1; i <= cfg.max_outer; ++i) {
      const double mu_used = state.mu, rho_used = state.rho;
      StepStats sub, coord;
      state = subspace_step(std::move(state), Xhat, M, S, cfg, &sub);
      state = coordinate_step(std::move(state), Xhat, M, S, cfg, &coord);
      state = multiplier_update(std::move(state), S, c_mu, c_rho);
      history.push_back({i, coord.cost_after, state.eps, mu_used, rho_used,
                         sub.inner_iterations + coord.inner_iterations});
      if (state.eps < cfg.tau) break;
    }
  } catch (const DivergenceError& e) {
    throw BatchDivergence(std::string("run_batch: ") + e.what() + " at outer iteration " +
                              std::to_string(state.iter + 1),
                          std::move(history));
  }

  BatchResult out;
  out.Lhat = hankel_project(state.L);
  out.Shat = mask_residual(X0, M, out.Lhat);
  out.iterations_used = state.iter;
  out.history = std::move(history);
  return out;
}

} // namespace rslra::batch
