#include "rslra/structure.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace rslra::structure {

HankelStructure HankelStructure::for_series(Index len, Index m) {
  if (m < 1 || len < m)
    throw std::invalid_argument("HankelStructure: need series length >= m >= 1, got len=" +
                                std::to_string(len) + ", m=" + std::to_string(m));
  return HankelStructure{m, len - m + 1};
}

void HankelStructure::validate() const {
  if (rows < 1 || cols < 1)
    throw std::invalid_argument("HankelStructure: rows and cols must be >= 1");
}

ObservationMask ObservationMask::all(Index m, Index n) {
  ObservationMask mask;
  mask.observed = BoolArray::Constant(m, n, true);
  mask.count_observed = m * n;
  mask.validate();
  return mask;
}

ObservationMask ObservationMask::from_array(BoolArray observed) {
  ObservationMask mask;
  mask.count_observed = observed.count();
  mask.observed = std::move(observed);
  mask.validate();
  return mask;
}

void ObservationMask::validate() const {
  if (count_observed != observed.count())
    throw std::invalid_argument("ObservationMask: count_observed out of sync");
  if (count_observed < 1)
    throw std::invalid_argument("ObservationMask: at least one entry must be observed");
}

Matrix hankel_build(const Vector& d, Index m) {
  if (m < 1 || d.size() < m)
    throw std::invalid_argument("hankel_build: series of length " + std::to_string(d.size()) +
                                " is shorter than m=" + std::to_string(m));
  const Index n = d.size() - m + 1;
  Matrix X(m, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < m; ++i) X(i, j) = d(i + j);
  return X;
}

Matrix hankel_project(const Matrix& X) {
  const Index m = X.rows(), n = X.cols();
  const Index len = m + n - 1;
  Vector sums = Vector::Zero(len);
  Eigen::VectorXi counts = Eigen::VectorXi::Zero(len);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < m; ++i) {
      sums(i + j) += X(i, j);
      counts(i + j) += 1;
    }
  for (Index s = 0; s < len; ++s) sums(s) /= counts(s);
  Matrix P(m, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < m; ++i) P(i, j) = sums(i + j);
  return P;
}

Vector hankel_extract_series(const Matrix& X, double tol) {
  const Index m = X.rows(), n = X.cols();
  const Index len = m + n - 1;
  const double scale = std::max(1.0, X.cwiseAbs().maxCoeff());
  Vector d(len);
  for (Index s = 0; s < len; ++s) {
    const Index i0 = std::max<Index>(0, s - n + 1);
    const Index i1 = std::min<Index>(m - 1, s);
    double lo = X(i0, s - i0), hi = lo;
    for (Index i = i0 + 1; i <= i1; ++i) {
      const double v = X(i, s - i);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    if (hi - lo > tol * scale)
      throw DataError("hankel_extract_series: anti-diagonal " + std::to_string(s) +
                      " has spread " + std::to_string(hi - lo) + ", input is not Hankel");
    // Any representative is valid once the spread check passed; reading one
    // entry keeps extract(build(d)) an exact round trip.
    d(s) = X(i1, s - i1);
  }
  return d;
}

StructureResidual structure_residual(const Matrix& X) {
  StructureResidual res;
  res.R = X - hankel_project(X);
  res.eps = res.R.norm() / (static_cast<double>(X.rows()) * static_cast<double>(X.cols()));
  return res;
}

Matrix mask_residual(const Matrix& Xhat, const ObservationMask& M, const Matrix& L) {
  if (Xhat.rows() != L.rows() || Xhat.cols() != L.cols() || Xhat.rows() != M.rows() ||
      Xhat.cols() != M.cols())
    throw std::invalid_argument("mask_residual: dimension mismatch");
  return M.observed.select((Xhat - L).array(), 0.0).matrix();
}

ObservationMask forecast_mask(Index m, Index n, Index r) {
  if (r < 0 || r > n)
    throw std::invalid_argument("forecast_mask: need 0 <= r <= n, got r=" + std::to_string(r));
  BoolArray obs = BoolArray::Constant(m, n, true);
  // Anti-diagonals s = i + j beyond m + n - 2 - r are the padded future.
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < m; ++i)
      if (i + j > m + n - 2 - r) obs(i, j) = false;
  return ObservationMask::from_array(std::move(obs));
}

} // namespace rslra::structure
