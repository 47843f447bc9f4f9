#include "rslra/objective.hpp"

#include <cmath>
#include <stdexcept>

namespace rslra::objective {

using structure::hankel_project;
using structure::mask_residual;

void SmoothingParams::validate() const {
  if (!(mu > 0)) throw std::invalid_argument("SmoothingParams: need mu > 0");
  if (!(p > 0 && p < 1)) throw std::invalid_argument("SmoothingParams: need 0 < p < 1");
}

void LagrangianParams::validate() const {
  if (!(rho > 0)) throw std::invalid_argument("LagrangianParams: need rho > 0");
  if (!Lambda.allFinite()) throw std::invalid_argument("LagrangianParams: Lambda must be finite");
}

double smoothed_lp(const Matrix& X, const SmoothingParams& sp) {
  sp.validate();
  const auto shifted = (X.array().square() + sp.mu).eval();
  if (sp.p == 0.5) return shifted.sqrt().sqrt().sum(); // (x^2+mu)^(1/4)
  return shifted.pow(sp.p / 2.0).sum();
}

Matrix smoothed_lp_grad(const Matrix& X, const SmoothingParams& sp) {
  sp.validate();
  const auto shifted = (X.array().square() + sp.mu).eval();
  if (sp.p == 0.5) {
    // (x^2+mu)^(p/2-1) = (x^2+mu)^(1/4) / (x^2+mu)
    return (sp.p * X.array() * shifted.sqrt().sqrt() / shifted).matrix();
  }
  return (sp.p * X.array() * shifted.pow(sp.p / 2.0 - 1.0)).matrix();
}

namespace {

void check_shapes(const Matrix& W, const Matrix& Xhat, const structure::ObservationMask& M,
                  const LagrangianParams& lp, const structure::HankelStructure& S) {
  if (W.rows() != Xhat.rows() || W.cols() != Xhat.cols() || W.rows() != M.rows() ||
      W.cols() != M.cols() || W.rows() != lp.Lambda.rows() || W.cols() != lp.Lambda.cols() ||
      W.rows() != S.rows || W.cols() != S.cols)
    throw std::invalid_argument("augmented Lagrangian cost: dimension mismatch");
}

// Value of the three-term cost at the low-rank candidate W.
double cost_at(const Matrix& W, const Matrix& Xhat, const structure::ObservationMask& M,
               const LagrangianParams& lp, const SmoothingParams& sp,
               const structure::HankelStructure& S) {
  check_shapes(W, Xhat, M, lp, S);
  lp.validate();
  const Matrix Z = mask_residual(Xhat, M, W);
  const Matrix R = W - hankel_project(W);
  const double data = smoothed_lp(Z, sp);
  const double coupling = (lp.Lambda.array() * R.array()).sum();
  return data - coupling + 0.5 * lp.rho * R.squaredNorm();
}

// Gradient of the three-term cost with respect to W. The Hankel projection
// is an orthogonal (hence self-adjoint, idempotent) projector, which gives
// d/dW <Lambda, W - P(W)> = Lambda - P(Lambda) and
// d/dW (rho/2)||W - P(W)||^2 = rho (W - P(W)).
Matrix cost_grad_at(const Matrix& W, const Matrix& Xhat, const structure::ObservationMask& M,
                    const LagrangianParams& lp, const SmoothingParams& sp,
                    const structure::HankelStructure& S) {
  check_shapes(W, Xhat, M, lp, S);
  lp.validate();
  const Matrix Z = mask_residual(Xhat, M, W);
  return -smoothed_lp_grad(Z, sp) - (lp.Lambda - hankel_project(lp.Lambda)) +
         lp.rho * (W - hankel_project(W));
}

} // namespace

double subspace_cost(const manifold::SubspaceBasis& U, const Matrix& L, const Matrix& Xhat,
                     const structure::ObservationMask& M, const LagrangianParams& lp,
                     const SmoothingParams& sp, const structure::HankelStructure& S) {
  const Matrix& B = U.matrix();
  const Matrix W = B * (B.transpose() * L);
  return cost_at(W, Xhat, M, lp, sp, S);
}

Matrix subspace_cost_grad(const manifold::SubspaceBasis& U, const Matrix& L, const Matrix& Xhat,
                          const structure::ObservationMask& M, const LagrangianParams& lp,
                          const SmoothingParams& sp, const structure::HankelStructure& S) {
  const Matrix& B = U.matrix();
  const Matrix W = B * (B.transpose() * L);
  const Matrix G = cost_grad_at(W, Xhat, M, lp, sp, S);
  // W = U U^T L, so dW = dU U^T L + U dU^T L and the chain rule gives
  // grad_U = G (U^T L)^T + L G^T U.
  return G * (L.transpose() * B) + L * (G.transpose() * B);
}

double coordinate_cost(const Matrix& Y, const manifold::SubspaceBasis& U, const Matrix& Xhat,
                       const structure::ObservationMask& M, const LagrangianParams& lp,
                       const SmoothingParams& sp, const structure::HankelStructure& S) {
  if (Y.rows() != U.cols() || Y.cols() != Xhat.cols())
    throw std::invalid_argument("coordinate_cost: Y must be k-by-n");
  const Matrix W = U.matrix() * Y;
  return cost_at(W, Xhat, M, lp, sp, S);
}

Matrix coordinate_cost_grad(const Matrix& Y, const manifold::SubspaceBasis& U, const Matrix& Xhat,
                            const structure::ObservationMask& M, const LagrangianParams& lp,
                            const SmoothingParams& sp, const structure::HankelStructure& S) {
  if (Y.rows() != U.cols() || Y.cols() != Xhat.cols())
    throw std::invalid_argument("coordinate_cost_grad: Y must be k-by-n");
  const Matrix W = U.matrix() * Y;
  const Matrix G = cost_grad_at(W, Xhat, M, lp, sp, S);
  return U.matrix().transpose() * G;
}

} // namespace rslra::objective
