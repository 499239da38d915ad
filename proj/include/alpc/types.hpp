#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "alpc/dense_matrix.hpp"

namespace alpc {

// A collection of views over the same n samples. View v is a d_v x n matrix
// whose column i is the feature vector of sample i in that view.
struct MultiViewDataset {
  std::vector<DenseMatrix> views;
  std::size_t n = 0;  // samples
  std::size_t c = 0;  // clusters
  std::optional<std::vector<int>> labels;  // ground truth in [0, c), if known

  std::size_t view_count() const noexcept { return views.size(); }
};

struct Hyperparams {
  double lambda1 = 1.0;          // anchor-to-basis coupling weight
  double lambda2 = 0.1;          // graph-to-indicator coupling weight
  int anchors_per_cluster = 2;   // m; the model learns m*c anchors per view
  int max_iter = 100;
  double tol = 1e-6;             // relative objective change for convergence
  std::uint64_t seed = 0;
  // The constraint flags default on. With both relaxations active the
  // indicator scales drift (P shrinks while R grows at fixed P^T R) and the
  // objective tail decays like 1/t instead of settling within ~20-80
  // iterations; turning either one off alone is unreliable.
  bool simplex_projection = true;        // project graph columns onto the simplex
  bool reorthonormalize_anchors = true;  // replace anchors by their polar factor
  double ridge_epsilon = 1e-8;   // diagonal shift used when a solve turns singular
  int kmeans_restarts = 50;
};

// All matrices learned by a fit. Anchors A_v are d_v x (m*c), bases U_v are
// d_v x c with orthonormal columns after each basis update, the consensus
// graph Z is (m*c) x n, the anchor indicator P is c x (m*c) and the data
// indicator R is c x n. P and R are relaxed real-valued indicators.
struct ModelState {
  std::vector<DenseMatrix> anchors;
  std::vector<DenseMatrix> bases;
  DenseMatrix graph;
  DenseMatrix anchor_indicator;
  DenseMatrix data_indicator;

  // Throws ShapeError if any matrix disagrees with the dataset/hyperparams.
  void ensure_consistent(const MultiViewDataset& data, const Hyperparams& hp) const;
};

struct FitReport {
  std::vector<double> objective_trace;  // one value per completed iteration
  int iterations = 0;
  bool converged = false;
  double wall_time_seconds = 0.0;

  // True when the trace never rises by more than the relative slack.
  bool objective_non_increasing(double rel_slack = 1e-9) const;
};

struct ExternalMetrics {
  double acc = 0.0;
  double nmi = 0.0;
  double purity = 0.0;
  double f_score = 0.0;
};

struct ClusteringResult {
  std::vector<int> predicted_labels;          // in [0, c)
  std::optional<ExternalMetrics> metrics;     // absent without ground truth
};

// Checks every dataset and hyperparameter invariant, throwing a
// ValidationError whose name() identifies the first violated one.
void validate(const MultiViewDataset& data, const Hyperparams& hp);

// The dataset-only subset of the checks above (used after deserialization).
void validate_dataset(const MultiViewDataset& data);

}  // namespace alpc
