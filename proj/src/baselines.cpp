#include "rslra/baselines.hpp"

#include "rslra/structure.hpp"

#include <Eigen/SVD>

#include <stdexcept>

namespace rslra::baselines {

using structure::forecast_mask;
using structure::hankel_build;
using structure::hankel_extract_series;
using structure::hankel_project;
using structure::ObservationMask;

Matrix svd_truncate(const Matrix& X, Index k) {
  if (k < 0 || k > std::min(X.rows(), X.cols()))
    throw std::invalid_argument("svd_truncate: k out of range");
  if (k == std::min(X.rows(), X.cols())) return X;
  Eigen::JacobiSVD<Matrix> svd(X, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return svd.matrixU().leftCols(k) * svd.singularValues().head(k).asDiagonal() *
         svd.matrixV().leftCols(k).transpose();
}

Vector ssa_denoise(const Vector& d, Index m, Index k) {
  return hankel_extract_series(hankel_project(svd_truncate(hankel_build(d, m), k)));
}

CadzowResult cadzow(const Vector& d, Index m, Index k, const BaselineConfig& cfg) {
  Matrix X = hankel_build(d, m);
  const double threshold = cfg.tol * X.norm();
  CadzowResult out;
  for (int it = 1; it <= cfg.max_iters; ++it) {
    const Matrix next = hankel_project(svd_truncate(X, k));
    const double change = (next - X).norm();
    X = next;
    out.iterations = it;
    if (change <= threshold) {
      out.converged = true;
      break;
    }
  }
  out.series = hankel_extract_series(X);
  return out;
}

CadzowForecastResult cadzow_forecast(const Vector& d, Index m, Index k, Index r,
                                     const BaselineConfig& cfg) {
  if (r < 1) throw std::invalid_argument("cadzow_forecast: need r >= 1");
  Vector padded = Vector::Zero(d.size() + r);
  padded.head(d.size()) = d;
  const Matrix X0 = hankel_build(padded, m);
  const ObservationMask M = forecast_mask(m, X0.cols(), r);
  const double threshold = cfg.tol * X0.norm();

  Matrix X = X0;        // iterate with observed entries imposed
  Matrix proj = X0;     // most recent Hankel iterate, used for the readout
  CadzowForecastResult out;
  for (int it = 1; it <= cfg.max_iters; ++it) {
    proj = hankel_project(svd_truncate(X, k));
    Matrix next = M.observed.select(X0.array(), proj.array()).matrix();
    const double change = (next - X).norm();
    X = std::move(next);
    out.iterations = it;
    if (change <= threshold) {
      out.converged = true;
      break;
    }
  }
  out.predictions = hankel_extract_series(proj).tail(r);
  return out;
}

} // namespace rslra::baselines
