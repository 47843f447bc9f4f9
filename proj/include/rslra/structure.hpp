#pragma once

#include "rslra/types.hpp"

namespace rslra::structure {

/// Descriptor of an m-by-n Hankel structure. A matrix X belongs to the
/// structure iff X(i,j) depends only on i+j, so it encodes a scalar series
/// of length m+n-1. Indices are 0-based internally; documentation that talks
/// about series positions uses 1-based positions and says so.
struct HankelStructure {
  Index rows = 0;
  Index cols = 0;

  Index series_len() const { return rows + cols - 1; }

  /// Structure covering a series of length `len` with `m` rows.
  static HankelStructure for_series(Index len, Index m);

  void validate() const;
};

/// Boolean mask of observed matrix entries.
struct ObservationMask {
  BoolArray observed;
  Index count_observed = 0;

  Index rows() const { return observed.rows(); }
  Index cols() const { return observed.cols(); }

  static ObservationMask all(Index m, Index n);
  static ObservationMask from_array(BoolArray observed);

  void validate() const;
};

/// Hankel matrix of the series d with m rows: X(i,j) = d(i+j).
/// Requires d.size() >= m.
Matrix hankel_build(const Vector& d, Index m);

/// Orthogonal projection onto Hankel matrices: every anti-diagonal is
/// replaced by its arithmetic mean (the diagonal averaging step).
Matrix hankel_project(const Matrix& X);

/// Series encoded by a Hankel matrix; exact inverse of hankel_build.
/// Throws DataError if any anti-diagonal spread exceeds `tol` relative to
/// the largest magnitude entry of X.
Vector hankel_extract_series(const Matrix& X, double tol = 1e-8);

struct StructureResidual {
  Matrix R;   // X - hankel_project(X)
  double eps; // ||R||_F / (m*n)
};

/// Distance of X to the Hankel structure, normalized by the entry count.
StructureResidual structure_residual(const Matrix& X);

/// Entry-wise (Xhat - L) on observed entries, exactly zero elsewhere.
Matrix mask_residual(const Matrix& Xhat, const ObservationMask& M, const Matrix& L);

/// Mask whose last r anti-diagonals (the lower-right corner) are unobserved.
/// r = 0 yields an all-observed mask. Requires 0 <= r <= n.
ObservationMask forecast_mask(Index m, Index n, Index r);

} // namespace rslra::structure
