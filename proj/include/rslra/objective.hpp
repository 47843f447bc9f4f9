#pragma once

#include "rslra/manifold.hpp"
#include "rslra/structure.hpp"
#include "rslra/types.hpp"

namespace rslra::objective {

/// Parameters of the smoothed lp data-fit term h_mu(X) = sum (x^2 + mu)^(p/2).
struct SmoothingParams {
  double mu = 0.005;
  double p = 0.5;

  void validate() const;
};

/// Structural multiplier and penalty weight of the augmented Lagrangian.
struct LagrangianParams {
  Matrix Lambda;
  double rho = 1e-6;

  void validate() const;
};

/// h_mu(X) = sum_ij (x_ij^2 + mu)^(p/2). Always >= m*n*mu^(p/2), with
/// equality iff X = 0. Behaves like an l0 count on large entries and like a
/// (weighted) squared l2 norm near zero, which is what makes the data fit
/// tolerate sparse gross outliers.
double smoothed_lp(const Matrix& X, const SmoothingParams& sp);

/// Entry-wise gradient of h_mu: p * x * (x^2 + mu)^(p/2 - 1).
Matrix smoothed_lp_grad(const Matrix& X, const SmoothingParams& sp);

/// Augmented-Lagrangian cost of the subspace update, as a function of U with
/// the previous low-rank iterate L held fixed. With W = U U^T L:
///
///   h_mu(mask_residual(Xhat, M, W)) - <Lambda, W - P(W)> + (rho/2) ||W - P(W)||_F^2
///
/// where P is the Hankel projection. The structural terms run over the full
/// matrix; unobserved entries contribute the constant mu^(p/2) each to the
/// data term, which does not affect minimizers.
double subspace_cost(const manifold::SubspaceBasis& U, const Matrix& L,
                     const Matrix& Xhat, const structure::ObservationMask& M,
                     const LagrangianParams& lp, const SmoothingParams& sp,
                     const structure::HankelStructure& S);

/// Euclidean gradient of subspace_cost in U (m-by-k).
Matrix subspace_cost_grad(const manifold::SubspaceBasis& U, const Matrix& L,
                          const Matrix& Xhat, const structure::ObservationMask& M,
                          const LagrangianParams& lp, const SmoothingParams& sp,
                          const structure::HankelStructure& S);

/// The analogous cost of the coordinate update, as a function of Y with U
/// fixed and W = U Y.
double coordinate_cost(const Matrix& Y, const manifold::SubspaceBasis& U,
                       const Matrix& Xhat, const structure::ObservationMask& M,
                       const LagrangianParams& lp, const SmoothingParams& sp,
                       const structure::HankelStructure& S);

/// Euclidean gradient of coordinate_cost in Y (k-by-n).
Matrix coordinate_cost_grad(const Matrix& Y, const manifold::SubspaceBasis& U,
                            const Matrix& Xhat, const structure::ObservationMask& M,
                            const LagrangianParams& lp, const SmoothingParams& sp,
                            const structure::HankelStructure& S);

} // namespace rslra::objective
