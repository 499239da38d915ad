#pragma once

#include <cstdint>
#include <vector>

#include "alpc/dense_matrix.hpp"

namespace alpc {

struct KmeansResult {
  std::vector<int> labels;        // length n, values in [0, k)
  DenseMatrix centroids;          // dim x k
  double inertia = 0.0;           // sum of squared distances to assigned centroid
  int restarts_run = 0;
  int empty_cluster_repairs = 0;  // points reseated into empty clusters
};

// Lloyd's algorithm from k-means++ seeds, restarted `restarts` times; the
// restart with the lowest inertia wins (ties go to the earliest restart).
// Columns of `points` are the samples. Within a restart, iterations stop at
// an assignment fixpoint or after 300 rounds; assignment ties prefer the
// lowest centroid index; an empty cluster is repaired by moving in the point
// farthest from its current centroid. Deterministic for a fixed seed.
KmeansResult kmeans(const DenseMatrix& points, int k, int restarts,
                    std::uint64_t seed);

}  // namespace alpc
