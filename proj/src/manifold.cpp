#include "rslra/manifold.hpp"

#include "rslra/random.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>

#include <atomic>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

namespace rslra::manifold {

namespace {

constexpr double kOrthonormalityTol = 1e-10;
constexpr double kHorizontalityTol = 1e-8;

std::atomic<std::uint64_t> g_basis_count{0};
std::atomic<double> g_basis_max_dev{0.0};

void record_deviation(double dev) {
  g_basis_count.fetch_add(1, std::memory_order_relaxed);
  double cur = g_basis_max_dev.load(std::memory_order_relaxed);
  while (dev > cur && !g_basis_max_dev.compare_exchange_weak(cur, dev, std::memory_order_relaxed)) {
  }
}

// Thin QR with the diagonal of R forced positive. Throws RetractionError on
// a numerically rank-deficient input.
Matrix thin_qr_positive(const Matrix& A) {
  const Index m = A.rows(), k = A.cols();
  Eigen::HouseholderQR<Matrix> qr(A);
  Matrix Q = qr.householderQ() * Matrix::Identity(m, k);
  const Matrix R = qr.matrixQR().topRows(k).template triangularView<Eigen::Upper>();
  const double scale = A.cwiseAbs().maxCoeff();
  for (Index i = 0; i < k; ++i) {
    const double rii = R(i, i);
    if (!std::isfinite(rii) || std::abs(rii) <= 1e-14 * std::max(1.0, scale))
      throw RetractionError("qr_retraction: rank-deficient input (R diagonal ~ 0)");
    if (rii < 0) Q.col(i) = -Q.col(i);
  }
  return Q;
}

} // namespace

SubspaceBasis::SubspaceBasis(Matrix entries) : entries_(std::move(entries)) {
  const Index m = entries_.rows(), k = entries_.cols();
  if (k < 1 || k >= m)
    throw std::invalid_argument("SubspaceBasis: need 1 <= k < m, got m=" + std::to_string(m) +
                                ", k=" + std::to_string(k));
  const double dev = (entries_.transpose() * entries_ - Matrix::Identity(k, k)).norm();
  if (!(dev <= kOrthonormalityTol))
    throw std::invalid_argument("SubspaceBasis: columns not orthonormal, ||U^T U - I||_F = " +
                                std::to_string(dev));
  record_deviation(dev);
}

SubspaceBasis SubspaceBasis::random(Index m, Index k, std::uint64_t seed) {
  Rng rng(seed);
  return SubspaceBasis(thin_qr_positive(rng.gaussian_matrix(m, k)));
}

SubspaceBasis SubspaceBasis::from_svd(const Matrix& X, Index k) {
  Eigen::JacobiSVD<Matrix> svd(X, Eigen::ComputeThinU);
  return SubspaceBasis(svd.matrixU().leftCols(k));
}

OrthonormalityStats orthonormality_stats() {
  return {g_basis_count.load(std::memory_order_relaxed),
          g_basis_max_dev.load(std::memory_order_relaxed)};
}

TangentVector::TangentVector(const SubspaceBasis& base, Matrix entries)
    : base_(base), entries_(std::move(entries)) {
  if (entries_.rows() != base_.rows() || entries_.cols() != base_.cols())
    throw std::invalid_argument("TangentVector: shape does not match the base point");
  const double norm = entries_.norm();
  if (norm > 0.0) {
    const double vertical = (base_.matrix().transpose() * entries_).norm();
    if (vertical > kHorizontalityTol * norm)
      throw std::invalid_argument("TangentVector: not horizontal, ||U^T xi|| / ||xi|| = " +
                                  std::to_string(vertical / norm));
  }
}

TangentVector horizontal_project(const SubspaceBasis& U, const Matrix& G) {
  if (G.rows() != U.rows() || G.cols() != U.cols())
    throw std::invalid_argument("horizontal_project: dimension mismatch");
  const Matrix& B = U.matrix();
  Matrix xi = G - B * (B.transpose() * G);
  xi -= B * (B.transpose() * xi); // second pass scrubs the rounding residue
  return TangentVector(U, std::move(xi));
}

SubspaceBasis qr_retraction(const SubspaceBasis& U, const TangentVector& xi, double t) {
  if (t < 0) throw std::invalid_argument("qr_retraction: need t >= 0");
  if (t == 0.0 || xi.matrix().norm() == 0.0) return U;
  return SubspaceBasis(thin_qr_positive(U.matrix() + t * xi.matrix()));
}

namespace {

// Shared Armijo backtracking. On success the accepted point and its cost are
// handed back so the caller never re-evaluates.
template <typename Point, typename Geometry>
double armijo_backtrack(const Geometry& geo, const std::function<double(const Point&)>& f,
                        const Point& x, const Matrix& dir, double f0, double slope,
                        const LineSearchOptions& opts, int* evaluations,
                        std::optional<Point>* accepted, double* accepted_cost) {
  if (!(slope < 0))
    throw std::invalid_argument("backtracking_line_search: slope must be negative (descent)");
  double t = opts.initial_step;
  for (int h = 0; h <= opts.max_halvings; ++h, t *= 0.5) {
    std::optional<Point> trial;
    try {
      trial.emplace(geo.retract(x, dir, t));
    } catch (const RetractionError&) {
      continue; // step too aggressive, shrink and retry
    }
    const double ft = f(*trial);
    if (evaluations) ++*evaluations;
    if (!std::isfinite(ft)) continue;
    if (ft <= f0 + opts.armijo_c1 * t * slope) {
      if (accepted) *accepted = std::move(trial);
      if (accepted_cost) *accepted_cost = ft;
      return t;
    }
  }
  return 0.0;
}

// The Stiefel and Euclidean variants share this skeleton; `Geometry`
// supplies gradient projection, retraction and transport.
template <typename Point, typename Geometry>
CgStats cg_core(Point& x, const std::function<double(const Point&)>& f,
                const std::function<Matrix(const Point&)>& grad_f, const CgOptions& opts,
                const Geometry& geo) {
  CgStats stats;

  auto riem_grad = [&](const Point& p) {
    Matrix g = grad_f(p);
    if (!g.allFinite()) throw DivergenceError("cg_minimize: non-finite gradient");
    return geo.project(p, g);
  };

  double fx = f(x);
  ++stats.cost_evaluations;
  if (!std::isfinite(fx)) throw DivergenceError("cg_minimize: non-finite cost at start");
  stats.cost_history.push_back(fx);

  Matrix g = riem_grad(x);
  double gnorm = g.norm();
  const double tol = std::max(opts.grad_tol_abs, opts.grad_tol_rel * gnorm);
  if (gnorm <= tol) {
    stats.final_cost = fx;
    stats.grad_norm = gnorm;
    stats.converged = true;
    return stats;
  }

  Matrix dir = -g;
  double step = opts.line_search.initial_step;

  for (int it = 0; it < opts.max_iterations; ++it) {
    double slope = (g.array() * dir.array()).sum();
    if (!(slope < 0)) { // conjugacy broke down, fall back to steepest descent
      dir = -g;
      slope = -gnorm * gnorm;
    }

    LineSearchOptions ls = opts.line_search;
    ls.initial_step = step;
    std::optional<Point> x_new;
    double f_new = fx;
    const double t = armijo_backtrack<Point>(geo, f, x, dir, fx, slope, ls,
                                             &stats.cost_evaluations, &x_new, &f_new);
    if (t == 0.0) break; // no acceptable step: numerically stationary

    Matrix g_new = riem_grad(*x_new);
    const double gnorm_new = g_new.norm();
    ++stats.iterations;
    stats.cost_history.push_back(f_new);

    const bool stagnated = fx - f_new <= opts.cost_tol_rel * (1.0 + std::abs(f_new));
    if (gnorm_new <= tol || stagnated) {
      x = std::move(*x_new);
      fx = f_new;
      gnorm = gnorm_new;
      break;
    }

    const Matrix g_old_t = geo.transport(*x_new, g);
    const Matrix dir_t = geo.transport(*x_new, dir);
    // Polak-Ribiere with restart on negative beta or lost conjugacy.
    double beta = ((g_new.array() * (g_new - g_old_t).array()).sum()) / (gnorm * gnorm);
    const double overlap = (g_new.array() * g_old_t.array()).sum();
    if (beta < 0 || overlap > 0.5 * gnorm_new * gnorm_new) beta = 0.0;

    dir = geo.project(*x_new, (-g_new + beta * dir_t).eval());
    x = std::move(*x_new);
    g = std::move(g_new);
    gnorm = gnorm_new;
    fx = f_new;
    step = 2.0 * t;
  }

  stats.final_cost = fx;
  stats.grad_norm = gnorm;
  stats.converged = gnorm <= tol;
  return stats;
}

struct StiefelGeometry {
  Matrix project(const SubspaceBasis& U, const Matrix& G) const {
    return horizontal_project(U, G).matrix();
  }
  Matrix transport(const SubspaceBasis& U_new, const Matrix& xi) const {
    return horizontal_project(U_new, xi).matrix();
  }
  SubspaceBasis retract(const SubspaceBasis& U, const Matrix& dir, double t) const {
    return qr_retraction(U, TangentVector(U, dir), t);
  }
};

struct EuclideanGeometry {
  Matrix project(const Matrix&, const Matrix& G) const { return G; }
  Matrix transport(const Matrix&, const Matrix& xi) const { return xi; }
  Matrix retract(const Matrix& Y, const Matrix& dir, double t) const { return Y + t * dir; }
};

} // namespace

double backtracking_line_search(const CostFn& f, const SubspaceBasis& U,
                                const TangentVector& xi, double f0, double slope,
                                const LineSearchOptions& opts, int* evaluations) {
  return armijo_backtrack<SubspaceBasis>(StiefelGeometry{}, f, U, xi.matrix(), f0, slope, opts,
                                         evaluations, nullptr, nullptr);
}

StiefelCgResult cg_minimize_stiefel(const CostFn& f, const GradFn& grad_f,
                                    const SubspaceBasis& U0, const CgOptions& opts) {
  SubspaceBasis U = U0;
  CgStats stats = cg_core<SubspaceBasis>(U, f, grad_f, opts, StiefelGeometry{});
  return {std::move(U), std::move(stats)};
}

EuclideanCgResult cg_minimize_euclidean(const FlatCostFn& f, const FlatGradFn& grad_f,
                                        const Matrix& Y0, const CgOptions& opts) {
  Matrix Y = Y0;
  CgStats stats = cg_core<Matrix>(Y, f, grad_f, opts, EuclideanGeometry{});
  return {std::move(Y), std::move(stats)};
}

} // namespace rslra::manifold
