#pragma once

#include <cstdint>
#include <vector>

#include "alpc/dense_matrix.hpp"

namespace alpc {

// Cross-tabulation of two labelings of the same samples. Labels may be any
// non-negative integers; they are compacted to dense indices internally.
struct ContingencyTable {
  std::size_t pred_clusters = 0;
  std::size_t true_clusters = 0;
  std::vector<std::int64_t> counts;  // row-major pred_clusters x true_clusters
  std::int64_t n = 0;

  static ContingencyTable from_labels(const std::vector<int>& pred,
                                      const std::vector<int>& truth);

  std::int64_t at(std::size_t i, std::size_t j) const {
    return counts[i * true_clusters + j];
  }
};

// Clustering accuracy: the best injective mapping of predicted clusters onto
// true clusters (Hungarian assignment on the contingency table), as a
// fraction of correctly mapped samples.
double accuracy(const std::vector<int>& pred, const std::vector<int>& truth);

// Normalized mutual information with natural-log entropies and geometric-mean
// normalization. 1.0 when both partitions are the trivial single cluster,
// 0.0 when exactly one of them is.
double nmi(const std::vector<int>& pred, const std::vector<int>& truth);

// Mean over predicted clusters of their dominant true-class fraction.
double purity(const std::vector<int>& pred, const std::vector<int>& truth);

// F1 over sample pairs: precision counts co-clustered pairs that agree with
// the truth, recall counts true pairs recovered.
double pairwise_f_score(const std::vector<int>& pred, const std::vector<int>& truth);

// Exact minimum-cost assignment on a square cost matrix; returns the column
// assigned to each row.
std::vector<int> hungarian(const DenseMatrix& cost);

}  // namespace alpc
