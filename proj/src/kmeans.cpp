#include "alpc/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "alpc/errors.hpp"
#include "alpc/rng.hpp"

namespace alpc {

namespace {

constexpr int kMaxLloydIterations = 300;

double squared_point_distance(const double* a, const double* b, std::size_t dim) {
  double s = 0.0;
  for (std::size_t r = 0; r < dim; ++r) {
    const double d = a[r] - b[r];
    s += d * d;
  }
  return s;
}

// D^2-weighted seeding. Falls back to the first unused point when every
// remaining distance is zero (duplicate-heavy inputs).
DenseMatrix seed_centroids(const DenseMatrix& points, int k, Rng& rng) {
  const std::size_t dim = points.rows();
  const std::size_t n = points.cols();
  DenseMatrix centroids(dim, static_cast<std::size_t>(k));
  std::vector<double> min_dist(n, std::numeric_limits<double>::infinity());
  std::vector<char> is_center(n, 0);

  std::size_t first = rng.uniform_index(n);
  std::copy(points.col(first), points.col(first) + dim, centroids.col(0));
  is_center[first] = 1;
  for (std::size_t i = 0; i < n; ++i)
    min_dist[i] = squared_point_distance(points.col(i), centroids.col(0), dim);

  for (int j = 1; j < k; ++j) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) total += min_dist[i];
    std::size_t chosen = n;
    if (total > 0.0) {
      const double r = rng.uniform01() * total;
      double cumulative = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        cumulative += min_dist[i];
        if (min_dist[i] > 0.0 && cumulative > r) {
          chosen = i;
          break;
        }
      }
      if (chosen == n) {  // roundoff fell off the end: last positive weight
        for (std::size_t i = n; i-- > 0;) {
          if (min_dist[i] > 0.0) {
            chosen = i;
            break;
          }
        }
      }
    }
    if (chosen == n) {  // all residual distances are zero
      for (std::size_t i = 0; i < n; ++i) {
        if (!is_center[i]) {
          chosen = i;
          break;
        }
      }
    }
    std::copy(points.col(chosen), points.col(chosen) + dim,
              centroids.col(static_cast<std::size_t>(j)));
    is_center[chosen] = 1;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = squared_point_distance(points.col(i),
                                              centroids.col(static_cast<std::size_t>(j)), dim);
      min_dist[i] = std::min(min_dist[i], d);
    }
  }
  return centroids;
}

// Nearest-centroid labels; strict comparison keeps the lowest index on ties.
void assign_labels(const DenseMatrix& points, const DenseMatrix& centroids,
                   std::vector<int>& labels) {
  const std::size_t dim = points.rows();
  const std::size_t n = points.cols();
  const std::size_t k = centroids.cols();
  for (std::size_t i = 0; i < n; ++i) {
    int best = 0;
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < k; ++j) {
      const double d = squared_point_distance(points.col(i), centroids.col(j), dim);
      if (d < best_dist) {
        best_dist = d;
        best = static_cast<int>(j);
      }
    }
    labels[i] = best;
  }
}

void recompute_centroids(const DenseMatrix& points, const std::vector<int>& labels,
                         DenseMatrix& centroids, std::vector<std::size_t>& sizes) {
  const std::size_t dim = points.rows();
  const std::size_t k = centroids.cols();
  std::fill(centroids.entries().begin(), centroids.entries().end(), 0.0);
  std::fill(sizes.begin(), sizes.end(), 0);
  for (std::size_t i = 0; i < points.cols(); ++i) {
    const std::size_t j = static_cast<std::size_t>(labels[i]);
    ++sizes[j];
    double* cj = centroids.col(j);
    const double* pi = points.col(i);
    for (std::size_t r = 0; r < dim; ++r) cj[r] += pi[r];
  }
  for (std::size_t j = 0; j < k; ++j) {
    if (sizes[j] == 0) continue;
    double* cj = centroids.col(j);
    const double inv = 1.0 / static_cast<double>(sizes[j]);
    for (std::size_t r = 0; r < dim; ++r) cj[r] *= inv;
  }
}

// Moves the globally farthest point (from its own centroid, among clusters
// that can spare one) into each empty cluster. Returns the number of moves.
int repair_empty_clusters(const DenseMatrix& points, std::vector<int>& labels,
                          DenseMatrix& centroids, std::vector<std::size_t>& sizes) {
  const std::size_t dim = points.rows();
  const std::size_t k = centroids.cols();
  int repairs = 0;
  for (std::size_t empty = 0; empty < k; ++empty) {
    if (sizes[empty] != 0) continue;
    std::size_t donor_point = points.cols();
    double worst = -1.0;
    for (std::size_t i = 0; i < points.cols(); ++i) {
      const std::size_t owner = static_cast<std::size_t>(labels[i]);
      if (sizes[owner] < 2) continue;
      const double d = squared_point_distance(points.col(i), centroids.col(owner), dim);
      if (d > worst) {
        worst = d;
        donor_point = i;
      }
    }
    if (donor_point == points.cols()) continue;  // n < k would be required
    labels[donor_point] = static_cast<int>(empty);
    ++repairs;
    recompute_centroids(points, labels, centroids, sizes);
  }
  return repairs;
}

struct SingleRun {
  std::vector<int> labels;
  DenseMatrix centroids;
  double inertia = 0.0;
  int repairs = 0;
};

SingleRun lloyd_from_seed(const DenseMatrix& points, int k, std::uint64_t seed) {
  const std::size_t n = points.cols();
  Rng rng(seed);
  SingleRun run;
  run.centroids = seed_centroids(points, k, rng);
  run.labels.assign(n, 0);
  assign_labels(points, run.centroids, run.labels);

  std::vector<std::size_t> sizes(static_cast<std::size_t>(k), 0);
  std::vector<int> next(n, 0);
  for (int iter = 0; iter < kMaxLloydIterations; ++iter) {
    recompute_centroids(points, run.labels, run.centroids, sizes);
    const int repaired = repair_empty_clusters(points, run.labels, run.centroids, sizes);
    run.repairs += repaired;
    next = run.labels;
    assign_labels(points, run.centroids, next);
    if (repaired == 0 && next == run.labels) break;
    run.labels = next;
  }
  recompute_centroids(points, run.labels, run.centroids, sizes);
  run.repairs += repair_empty_clusters(points, run.labels, run.centroids, sizes);

  run.inertia = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    run.inertia += squared_point_distance(
        points.col(i), run.centroids.col(static_cast<std::size_t>(run.labels[i])),
        points.rows());
  }
  return run;
}

}  // namespace

KmeansResult kmeans(const DenseMatrix& points, int k, int restarts, std::uint64_t seed) {
  const std::size_t n = points.cols();
  if (k < 1) throw ArgumentError("kmeans: k must be at least 1");
  if (static_cast<std::size_t>(k) > n)
    throw ArgumentError("kmeans: k=" + std::to_string(k) + " exceeds n=" + std::to_string(n));
  if (restarts < 1) throw ArgumentError("kmeans: restarts must be at least 1");
  if (points.rows() == 0) throw ArgumentError("kmeans: points have zero dimension");

  // Per-restart seeds are drawn up front so that a longer restart schedule
  // extends, rather than reshuffles, a shorter one.
  Rng master(seed);
  std::vector<std::uint64_t> restart_seeds(static_cast<std::size_t>(restarts));
  for (auto& s : restart_seeds) s = master.next_u64();

  SingleRun best;
  bool have_best = false;
  for (int r = 0; r < restarts; ++r) {
    SingleRun run = lloyd_from_seed(points, k, restart_seeds[static_cast<std::size_t>(r)]);
    if (!have_best || run.inertia < best.inertia) {
      best = std::move(run);
      have_best = true;
    }
  }

  KmeansResult result;
  result.labels = std::move(best.labels);
  result.centroids = std::move(best.centroids);
  result.inertia = best.inertia;
  result.restarts_run = restarts;
  result.empty_cluster_repairs = best.repairs;
  return result;
}

}  // namespace alpc
