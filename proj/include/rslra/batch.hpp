#pragma once

#include "rslra/manifold.hpp"
#include "rslra/objective.hpp"
#include "rslra/structure.hpp"
#include "rslra/types.hpp"

#include <cstdint>
#include <vector>

namespace rslra::batch {

enum class Init { svd, random };

struct BatchConfig {
  Index k = 1;           // rank bound
  double mu0 = 0.05;     // smoothing schedule start
  double muI = 0.005;    // smoothing schedule end
  double rho0 = 1e-6;    // penalty schedule start
  double rhoI = 10.0;    // penalty schedule end
  double p = 0.5;        // lp exponent
  int max_outer = 128;   // outer iteration budget I
  double tau = 5e-4;     // early-stop threshold on the structure residual
  Init init = Init::svd;
  std::uint64_t seed = 0; // used by Init::random
  manifold::CgOptions cg; // inner solver budget, shared by both steps

  void validate() const;
};

/// Everything the alternating scheme evolves. After a coordinate step,
/// L = U * Y holds to 1e-12; between a subspace step and the following
/// coordinate step, L is still the previous iterate by construction.
struct SolverState {
  manifold::SubspaceBasis U;
  Matrix Y;      // k-by-n coordinates
  Matrix L;      // m-by-n low-rank estimate
  Matrix Lambda; // structural multiplier
  double mu = 0.0;
  double rho = 0.0;
  double eps = 0.0; // structure residual of L, ||L - P(L)||_F / (m*n)
  int iter = 0;
};

struct IterationRecord {
  int iter = 0;
  double cost = 0.0; // coordinate cost at the end of the iteration
  double eps = 0.0;
  double mu = 0.0;  // value used during this iteration
  double rho = 0.0; // value used during this iteration
  int inner_iterations = 0;
};

struct BatchResult {
  Matrix Lhat; // Hankel by construction
  Matrix Shat; // X0 - Lhat on observed entries, zero elsewhere
  std::vector<IterationRecord> history;
  int iterations_used = 0;
};

/// Carries a failed run's partial history along with the diagnostic.
class BatchDivergence : public DivergenceError {
public:
  BatchDivergence(const std::string& what, std::vector<IterationRecord> history)
      : DivergenceError(what), history(std::move(history)) {}
  std::vector<IterationRecord> history;
};

struct StepStats {
  int inner_iterations = 0;
  double cost_before = 0.0;
  double cost_after = 0.0;
};

/// Geometric factor c with v0 * c^(iters-1) = vI. Requires iters >= 2 and
/// positive endpoints.
double schedule_factor(double v0, double vI, int iters);

/// Initial state: X0 is Xhat with unobserved entries zeroed, U from a seeded
/// gaussian QR or the top-k left singular vectors of X0, Y = U^T X0,
/// L = U Y, Lambda = 0.
SolverState init_state(const Matrix& Xhat, const structure::ObservationMask& M,
                       const BatchConfig& cfg);

/// Minimizes the subspace cost over the Stiefel manifold with L, Lambda, mu
/// and rho held fixed; only U changes.
SolverState subspace_step(SolverState state, const Matrix& Xhat,
                          const structure::ObservationMask& M,
                          const structure::HankelStructure& S,
                          const BatchConfig& cfg, StepStats* stats = nullptr);

/// Minimizes the coordinate cost over Y in Euclidean space (warm-started at
/// U^T L so the step never starts above the subspace step's final cost) and
/// recomputes L = U * Y.
SolverState coordinate_step(SolverState state, const Matrix& Xhat,
                            const structure::ObservationMask& M,
                            const structure::HankelStructure& S,
                            const BatchConfig& cfg, StepStats* stats = nullptr);

/// Lambda <- Lambda - rho * (L - P(L)), then eps is recomputed and the
/// schedules advance: mu <- c_mu * mu, rho <- c_rho * rho.
SolverState multiplier_update(SolverState state, const structure::HankelStructure& S,
                              double c_mu, double c_rho);

/// The full alternating scheme: subspace step, coordinate step, multiplier
/// update, for at most cfg.max_outer iterations with early stop when
/// eps < cfg.tau. Returns Lhat = hankel_project(L_final) and
/// Shat = X0 - Lhat restricted to observed entries.
BatchResult run_batch(const Matrix& Xhat, const structure::ObservationMask& M,
                      const BatchConfig& cfg);

} // namespace rslra::batch
