#pragma once

#include "rslra/types.hpp"

#include <functional>
#include <vector>

namespace rslra::manifold {

/// An m-by-k matrix with orthonormal columns: a point on the Stiefel
/// manifold representing the subspace spanned by its columns. The projector
/// U*U^T identifies the subspace itself, so costs that depend on U only
/// through the projector are invariant under right-multiplication by any
/// orthogonal k-by-k matrix.
///
/// The constructor enforces ||U^T U - I||_F <= 1e-10 and 1 <= k < m and
/// throws std::invalid_argument otherwise.
class SubspaceBasis {
public:
  explicit SubspaceBasis(Matrix entries);

  const Matrix& matrix() const { return entries_; }
  Index rows() const { return entries_.rows(); }
  Index cols() const { return entries_.cols(); }

  /// Orthonormal basis from a seeded gaussian matrix (thin QR).
  static SubspaceBasis random(Index m, Index k, std::uint64_t seed);

  /// Top-k left singular vectors of X.
  static SubspaceBasis from_svd(const Matrix& X, Index k);

private:
  Matrix entries_;
};

/// Feasibility statistics accumulated over every SubspaceBasis ever
/// constructed in this process (constructions that fail the orthonormality
/// check throw and are not counted).
struct OrthonormalityStats {
  std::uint64_t count = 0;
  double max_deviation = 0.0;
};
OrthonormalityStats orthonormality_stats();

/// A horizontal tangent matrix at a given basis: U^T xi = 0. The base point
/// is stored by value. Construction checks horizontality at 1e-8 relative
/// to ||xi||_F.
class TangentVector {
public:
  TangentVector(const SubspaceBasis& base, Matrix entries);

  const Matrix& matrix() const { return entries_; }
  const SubspaceBasis& base() const { return base_; }

private:
  SubspaceBasis base_;
  Matrix entries_;
};

/// Projection of an arbitrary m-by-k matrix onto the horizontal space at U:
/// (I - U U^T) G, applied twice so the result is horizontal to working
/// precision even for nearly-vertical G.
TangentVector horizontal_project(const SubspaceBasis& U, const Matrix& G);

/// Q factor of the thin QR decomposition of U + t*xi, with the diagonal of
/// R forced positive so the result is deterministic. t = 0 returns U
/// unchanged. Throws RetractionError when U + t*xi is numerically rank
/// deficient (the caller shrinks t).
SubspaceBasis qr_retraction(const SubspaceBasis& U, const TangentVector& xi, double t);

using CostFn = std::function<double(const SubspaceBasis&)>;
using GradFn = std::function<Matrix(const SubspaceBasis&)>; // Euclidean gradient, m-by-k

struct LineSearchOptions {
  double initial_step = 1.0;
  double armijo_c1 = 1e-4;
  int max_halvings = 30;
};

struct CgOptions {
  int max_iterations = 60;
  double grad_tol_rel = 1e-8;  // relative to the initial gradient norm
  double grad_tol_abs = 1e-12;
  // Stagnation exit: stop once an accepted step decreases the cost by less
  // than cost_tol_rel * (1 + |f|). This is what lets a warm-started solve
  // return after a couple of iterations instead of consuming the budget.
  double cost_tol_rel = 1e-8;
  LineSearchOptions line_search;
};

struct CgStats {
  int iterations = 0;
  int cost_evaluations = 0;
  double final_cost = 0.0;
  double grad_norm = 0.0;
  bool converged = false; // gradient tolerance reached
  std::vector<double> cost_history; // initial cost, then cost after each accepted step
};

struct StiefelCgResult {
  SubspaceBasis minimizer;
  CgStats stats;
};

struct EuclideanCgResult {
  Matrix minimizer;
  CgStats stats;
};

/// Armijo backtracking along xi: largest t = t0 / 2^h (h <= max_halvings)
/// with f(retract(U, xi, t)) <= f0 + c1 * t * slope. Returns 0 when no such
/// step exists, which signals stationarity to the caller. Requires
/// slope = <grad, xi> < 0.
double backtracking_line_search(const CostFn& f, const SubspaceBasis& U,
                                const TangentVector& xi, double f0, double slope,
                                const LineSearchOptions& opts,
                                int* evaluations = nullptr);

/// Polak-Ribiere conjugate gradient on the Stiefel manifold with QR
/// retraction, projection transport, and Armijo line search. Directions
/// restart to steepest descent when the PR coefficient turns negative or
/// conjugacy is lost. Stops when the Riemannian gradient norm falls below
/// max(grad_tol_abs, grad_tol_rel * initial norm) or the budget runs out.
/// Throws DivergenceError on non-finite cost or gradient.
StiefelCgResult cg_minimize_stiefel(const CostFn& f, const GradFn& grad_f,
                                    const SubspaceBasis& U0, const CgOptions& opts);

using FlatCostFn = std::function<double(const Matrix&)>;
using FlatGradFn = std::function<Matrix(const Matrix&)>;

/// The same CG scheme in flat Euclidean matrix space (used for the
/// coordinate updates). Same options and stopping rules.
EuclideanCgResult cg_minimize_euclidean(const FlatCostFn& f, const FlatGradFn& grad_f,
                                        const Matrix& Y0, const CgOptions& opts);

} // namespace rslra::manifold
