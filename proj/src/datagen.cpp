#include "rslra/datagen.hpp"

#include "rslra/random.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <stdexcept>

namespace rslra::datagen {

void LTVSpec::validate() const {
  if (k < 1 || N < 1) throw std::invalid_argument("LTVSpec: need k >= 1 and N >= 1");
  if (sp_rate < 0 || sp_rate > 1) throw std::invalid_argument("LTVSpec: sp_rate must be in [0,1]");
  if (sigma < 0) throw std::invalid_argument("LTVSpec: sigma must be >= 0");
}

Matrix random_skew_symmetric(Index k, std::uint64_t seed) {
  if (k < 1) throw std::invalid_argument("random_skew_symmetric: need k >= 1");
  Rng rng(seed);
  Matrix Z = Matrix::Zero(k, k);
  for (Index i = 0; i < k; ++i)
    for (Index j = i + 1; j < k; ++j) {
      const double v = rng.gaussian();
      Z(i, j) = v;
      Z(j, i) = -v;
    }
  return Z;
}

LTVData ltv_impulse_response(const LTVSpec& spec) {
  spec.validate();
  const Matrix Z = random_skew_symmetric(spec.k, spec.seed);
  Rng rng(spec.seed + 1); // separate stream for b, c and the noise

  Vector b(spec.k), c(spec.k);
  for (Index i = 0; i < spec.k; ++i) b(i) = rng.uniform();
  for (Index i = 0; i < spec.k; ++i) c(i) = rng.uniform();

  LTVData out;
  out.clean.resize(spec.N);
  out.states.resize(spec.k, spec.N);
  Vector x = b; // impulse through the input vector: x(1) = b
  for (Index t = 1; t <= spec.N; ++t) {
    out.states.col(t - 1) = x;
    out.clean(t - 1) = c.dot(x);
    if (t < spec.N) {
      const Matrix A = (spec.drift * static_cast<double>(t) * Z).exp();
      x = A * x;
    }
  }

  out.noisy = out.clean;
  out.outlier_mask.assign(spec.N, false);
  for (Index t = 0; t < spec.N; ++t) {
    out.noisy(t) += spec.sigma * rng.gaussian();
    if (rng.uniform() < spec.sp_rate) {
      out.noisy(t) += rng.uniform() < 0.5 ? spec.sp_amp : -spec.sp_amp;
      out.outlier_mask[t] = true;
    }
  }
  return out;
}

Vector lti_series(Index k, Index N, std::uint64_t seed) {
  if (k < 1 || N < 1) throw std::invalid_argument("lti_series: need k >= 1 and N >= 1");
  Rng rng(seed);

  const Index pairs = k / 2;
  std::vector<double> freqs;
  freqs.reserve(pairs);
  while (static_cast<Index>(freqs.size()) < pairs) {
    const double w = rng.uniform(0.3, 2.8);
    bool separated = true;
    for (double u : freqs)
      if (std::abs(u - w) < 0.25) separated = false;
    if (separated) freqs.push_back(w);
  }

  Vector d = Vector::Zero(N);
  for (Index q = 0; q < pairs; ++q) {
    const double amp = rng.uniform(0.5, 1.5);
    const double phase = rng.uniform(0.0, 2.0 * M_PI);
    for (Index t = 0; t < N; ++t)
      d(t) += amp * std::sin(freqs[q] * static_cast<double>(t + 1) + phase);
  }
  if (k % 2 == 1) { // odd order: add one slowly decaying real mode
    const double amp = rng.uniform(0.5, 1.5);
    const double rho = rng.uniform(0.995, 0.999);
    for (Index t = 0; t < N; ++t) d(t) += amp * std::pow(rho, static_cast<double>(t + 1));
  }
  return d;
}

} // namespace rslra::datagen
