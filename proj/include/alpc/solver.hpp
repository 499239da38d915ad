#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "alpc/types.hpp"

namespace alpc {

enum class Variant {
  kFull,       // anchor learning with potential-cluster constraints
  kBaselineA,  // anchors + Frobenius-regularized graph only (ablation)
};

struct SolverConfig {
  Hyperparams hp;
  Variant variant = Variant::kFull;
  std::optional<double> baseline_gamma;  // required for kBaselineA
  bool run_to_max_iter = false;          // disable the convergence early-exit
};

// Value of the full model objective at the given state:
//   sum_v ||X_v - A_v Z||_F^2
//   + lambda1 * sum_v ||A_v - U_v P||_F^2
//   + lambda2 * ||Z - P^T R||_F^2
double objective(const ModelState& state, const MultiViewDataset& data,
                 const Hyperparams& hp);

// Ablation objective: sum_v ||X_v - A_v Z||_F^2 + gamma * ||Z||_F^2.
double baseline_objective(const ModelState& state, const MultiViewDataset& data,
                          double gamma);

// Block updates. Each replaces one variable group with the closed-form
// minimizer of its subproblem, all other groups held fixed.
void update_anchors(ModelState& state, const MultiViewDataset& data,
                    const Hyperparams& hp);
void update_graph(ModelState& state, const MultiViewDataset& data,
                  const Hyperparams& hp);
void update_anchor_indicator(ModelState& state, const MultiViewDataset& data,
                             const Hyperparams& hp);
void update_data_indicator(ModelState& state, const Hyperparams& hp);
void update_basis(ModelState& state, const Hyperparams& hp);

// Deterministic starting point: block anchor indicator, near-uniform simplex
// graph columns, data indicator seeded by k-means on the normalized
// concatenated features, zero anchors and bases.
ModelState init_state(const MultiViewDataset& data, const Hyperparams& hp,
                      std::uint64_t seed);

// Alternating minimization until the relative objective change drops below
// hp.tol or hp.max_iter is reached. Dispatches to fit_baseline for the
// ablation variant. Throws FitError carrying the partial trace if a block
// update fails.
std::pair<ModelState, FitReport> fit(const MultiViewDataset& data,
                                     const SolverConfig& config);

// Ablation solver: alternates the anchor and graph updates of the
// reconstruction-plus-ridge model, ignoring the cluster-constraint terms.
std::pair<ModelState, FitReport> fit_baseline(const MultiViewDataset& data,
                                              const SolverConfig& config);

// Euclidean projection onto {z >= 0, sum(z) = 1} by sort-and-threshold.
std::vector<double> simplex_project(const std::vector<double>& v);

// Polar factor with orthonormal columns, computed from the thin SVD.
DenseMatrix polar_orthonormal(const DenseMatrix& a);

}  // namespace alpc
