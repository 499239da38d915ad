#include "alpc/synth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "alpc/errors.hpp"
#include "alpc/rng.hpp"

namespace alpc {

namespace {

void check_spec(const SynthSpec& spec) {
  if (spec.c < 2) throw ArgumentError("synth: need at least 2 clusters");
  if (spec.n < spec.c)
    throw ArgumentError("synth: n=" + std::to_string(spec.n) + " is below c=" +
                        std::to_string(spec.c));
  if (spec.l < 1) throw ArgumentError("synth: need at least one view");
  if (spec.view_dims.size() != spec.l)
    throw ArgumentError("synth: got " + std::to_string(spec.view_dims.size()) +
                        " view dims for " + std::to_string(spec.l) + " views");
  if (spec.latent_dim < 1) throw ArgumentError("synth: latent dimension must be positive");
  for (std::size_t d : spec.view_dims)
    if (d < 1) throw ArgumentError("synth: view dimensions must be positive");
  if (!(spec.separation > 0.0)) throw ArgumentError("synth: separation must be positive");
  if (!(spec.noise_sigma > 0.0)) throw ArgumentError("synth: noise sigma must be positive");
}

// Gaussian cluster means rescaled so the closest pair sits at least
// `target` apart; degenerate draws fall back to a coordinate lattice.
DenseMatrix draw_means(std::size_t latent_dim, std::size_t c, double target, Rng& rng) {
  DenseMatrix means(latent_dim, c);
  for (std::size_t j = 0; j < c; ++j)
    for (std::size_t i = 0; i < latent_dim; ++i) means(i, j) = rng.normal();

  double min_dist = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a + 1 < c; ++a) {
    for (std::size_t b = a + 1; b < c; ++b) {
      double d = 0.0;
      for (std::size_t i = 0; i < latent_dim; ++i) {
        const double diff = means(i, a) - means(i, b);
        d += diff * diff;
      }
      min_dist = std::min(min_dist, std::sqrt(d));
    }
  }
  if (min_dist <= 1e-12 * target) {
    for (auto& x : means.entries()) x = 0.0;
    for (std::size_t j = 0; j < c; ++j) means(0, j) = static_cast<double>(j) * target;
  } else if (min_dist < target) {
    const double s = target / min_dist;
    for (auto& x : means.entries()) x *= s;
  }
  return means;
}

// Modified Gram-Schmidt over columns with a re-orthogonalization pass.
void orthonormalize_columns(DenseMatrix& m) {
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  for (std::size_t j = 0; j < cols; ++j) {
    double* mj = m.col(j);
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t k = 0; k < j; ++k) {
        const double* mk = m.col(k);
        double proj = 0.0;
        for (std::size_t r = 0; r < rows; ++r) proj += mk[r] * mj[r];
        for (std::size_t r = 0; r < rows; ++r) mj[r] -= proj * mk[r];
      }
    }
    double nrm = 0.0;
    for (std::size_t r = 0; r < rows; ++r) nrm += mj[r] * mj[r];
    nrm = std::sqrt(nrm);
    if (nrm <= 1e-300) {
      // measure-zero draw; restart the column from a coordinate direction
      for (std::size_t r = 0; r < rows; ++r) mj[r] = (r == j % rows) ? 1.0 : 0.0;
      nrm = 1.0;
    }
    for (std::size_t r = 0; r < rows; ++r) mj[r] /= nrm;
  }
}

// A seeded linear map latent_dim -> d with orthonormal columns (d >= latent)
// or orthonormal rows (d < latent), so that latent distances survive.
DenseMatrix draw_view_map(std::size_t d, std::size_t latent_dim, Rng& rng) {
  DenseMatrix map(d, latent_dim);
  for (std::size_t j = 0; j < latent_dim; ++j)
    for (std::size_t i = 0; i < d; ++i) map(i, j) = rng.normal();
  if (d >= latent_dim) {
    orthonormalize_columns(map);
    return map;
  }
  DenseMatrix t(latent_dim, d);
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t i = 0; i < latent_dim; ++i) t(i, j) = map(j, i);
  orthonormalize_columns(t);
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t i = 0; i < latent_dim; ++i) map(j, i) = t(i, j);
  return map;
}

}  // namespace

MultiViewDataset generate(const SynthSpec& spec) {
  check_spec(spec);

  Rng mean_rng(Rng::child_seed(spec.seed, 0));
  const DenseMatrix means =
      draw_means(spec.latent_dim, spec.c, spec.separation * spec.noise_sigma, mean_rng);

  MultiViewDataset dataset;
  dataset.n = spec.n;
  dataset.c = spec.c;
  std::vector<int> labels(spec.n);
  for (std::size_t i = 0; i < spec.n; ++i) labels[i] = static_cast<int>(i % spec.c);

  for (std::size_t v = 0; v < spec.l; ++v) {
    Rng view_rng(Rng::child_seed(spec.seed, 1 + v));
    const std::size_t d = spec.view_dims[v];
    const DenseMatrix map = draw_view_map(d, spec.latent_dim, view_rng);

    // Per-cluster view centers, then noisy samples around them.
    DenseMatrix centers(d, spec.c);
    for (std::size_t j = 0; j < spec.c; ++j) {
      double* cj = centers.col(j);
      const double* mu = means.col(j);
      for (std::size_t r = 0; r < d; ++r) {
        double s = 0.0;
        for (std::size_t q = 0; q < spec.latent_dim; ++q) s += map(r, q) * mu[q];
        cj[r] = s;
      }
    }

    DenseMatrix x(d, spec.n);
    for (std::size_t i = 0; i < spec.n; ++i) {
      const double* cj = centers.col(static_cast<std::size_t>(labels[i]));
      double* xi = x.col(i);
      for (std::size_t r = 0; r < d; ++r)
        xi[r] = cj[r] + spec.noise_sigma * view_rng.normal();
    }
    dataset.views.push_back(std::move(x));
  }

  dataset.labels = std::move(labels);
  return dataset;
}

}  // namespace alpc
