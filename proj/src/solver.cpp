#include "alpc/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iostream>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "alpc/errors.hpp"
#include "alpc/kmeans.hpp"
#include "alpc/linalg.hpp"
#include "alpc/rng.hpp"

namespace alpc {

namespace {

// Substream ids for deriving independent random sequences from one run seed.
constexpr std::uint64_t kStreamGraphInit = 0;
constexpr std::uint64_t kStreamIndicatorInit = 1;

std::size_t anchor_count(const MultiViewDataset& data, const Hyperparams& hp) {
  return static_cast<std::size_t>(hp.anchors_per_cluster) * data.c;
}

// Solves m * x = rhs, retrying once with a ridge shift if the factorization
// hits a non-positive pivot.
DenseMatrix solve_spd_with_ridge(const DenseMatrix& m, const DenseMatrix& rhs,
                                 double ridge_epsilon, const char* context) {
  try {
    return spd_solve(m, rhs);
  } catch (const SingularMatrixError&) {
    std::cerr << "alpc: " << context << ": singular system, retrying with ridge "
              << ridge_epsilon << "\n";
    DenseMatrix shifted = m;
    add_to_diagonal(shifted, ridge_epsilon);
    return spd_solve(shifted, rhs);
  }
}

void project_columns_onto_simplex(DenseMatrix& m) {
  std::vector<double> column(m.rows());
  for (std::size_t j = 0; j < m.cols(); ++j) {
    std::copy(m.col(j), m.col(j) + m.rows(), column.begin());
    const std::vector<double> projected = simplex_project(column);
    std::copy(projected.begin(), projected.end(), m.col(j));
  }
}

// Stacks all views vertically with each sample's per-view feature vector
// scaled to unit length; the starting point for the data-indicator seeding.
DenseMatrix concatenated_normalized_features(const MultiViewDataset& data) {
  std::size_t total_dim = 0;
  for (const DenseMatrix& x : data.views) total_dim += x.rows();
  DenseMatrix out(total_dim, data.n);
  std::size_t offset = 0;
  for (const DenseMatrix& x : data.views) {
    for (std::size_t i = 0; i < data.n; ++i) {
      const double* src = x.col(i);
      double nrm = 0.0;
      for (std::size_t r = 0; r < x.rows(); ++r) nrm += src[r] * src[r];
      nrm = std::sqrt(nrm);
      const double inv = nrm > 0.0 ? 1.0 / nrm : 0.0;
      double* dst = out.col(i) + offset;
      for (std::size_t r = 0; r < x.rows(); ++r) dst[r] = src[r] * inv;
    }
    offset += x.rows();
  }
  return out;
}

void require_basis_feasible(const MultiViewDataset& data) {
  for (std::size_t v = 0; v < data.views.size(); ++v) {
    if (data.views[v].rows() < data.c)
      throw ValidationError("view-dim-below-clusters",
                            "view " + std::to_string(v) + " has dimension " +
                                std::to_string(data.views[v].rows()) +
                                " < c=" + std::to_string(data.c) +
                                "; orthonormal bases need d_v >= c");
  }
}

double relative_change(double current, double previous) {
  return std::abs(current - previous) / std::max(previous, 1e-300);
}

}  // namespace

std::vector<double> simplex_project(const std::vector<double>& v) {
  for (double x : v)
    if (!std::isfinite(x)) throw ArgumentError("simplex_project: non-finite entry");
  if (v.empty()) throw ArgumentError("simplex_project: empty vector");

  std::vector<double> u(v);
  std::sort(u.begin(), u.end(), std::greater<double>());
  double cumulative = 0.0;
  double theta = 0.0;
  std::size_t support = 0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    cumulative += u[j];
    const double candidate = (cumulative - 1.0) / static_cast<double>(j + 1);
    if (u[j] - candidate > 0.0) {
      theta = candidate;
      support = j + 1;
    }
  }
  (void)support;
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::max(v[i] - theta, 0.0);
  return out;
}

DenseMatrix polar_orthonormal(const DenseMatrix& a) {
  const SvdFactors f = thin_svd(a);
  return gemm(f.u, f.vt);
}

double objective(const ModelState& state, const MultiViewDataset& data,
                 const Hyperparams& hp) {
  double reconstruction = 0.0;
  for (std::size_t v = 0; v < data.views.size(); ++v)
    reconstruction += squared_distance(data.views[v], gemm(state.anchors[v], state.graph));

  double anchor_fit = 0.0;
  for (std::size_t v = 0; v < data.views.size(); ++v)
    anchor_fit += squared_distance(state.anchors[v],
                                   gemm(state.bases[v], state.anchor_indicator));

  const double graph_fit = squared_distance(
      state.graph, gemm(state.anchor_indicator, state.data_indicator, true, false));

  return reconstruction + hp.lambda1 * anchor_fit + hp.lambda2 * graph_fit;
}

double baseline_objective(const ModelState& state, const MultiViewDataset& data,
                          double gamma) {
  double reconstruction = 0.0;
  for (std::size_t v = 0; v < data.views.size(); ++v)
    reconstruction += squared_distance(data.views[v], gemm(state.anchors[v], state.graph));
  const double nrm = frobenius_norm(state.graph);
  return reconstruction + gamma * nrm * nrm;
}

void update_anchors(ModelState& state, const MultiViewDataset& data,
                    const Hyperparams& hp) {
  // A_v = (lambda1 U_v P + X_v Z^T)(Z Z^T + lambda1 I)^{-1}, via the
  // transposed SPD system.
  DenseMatrix gram = gemm(state.graph, state.graph, false, true);
  add_to_diagonal(gram, hp.lambda1);
  for (std::size_t v = 0; v < data.views.size(); ++v) {
    DenseMatrix target = gemm(data.views[v], state.graph, false, true);
    if (hp.lambda1 != 0.0) {
      target = add(target, scale(gemm(state.bases[v], state.anchor_indicator), hp.lambda1));
    }
    const DenseMatrix solved =
        solve_spd_with_ridge(gram, transpose(target), hp.ridge_epsilon, "anchor update");
    state.anchors[v] = transpose(solved);
    if (hp.reorthonormalize_anchors) state.anchors[v] = polar_orthonormal(state.anchors[v]);
  }
}

void update_graph(ModelState& state, const MultiViewDataset& data,
                  const Hyperparams& hp) {
  // Z = (sum_v A_v^T A_v + lambda2 I)^{-1} (sum_v A_v^T X_v + lambda2 P^T R)
  const std::size_t mc = state.graph.rows();
  DenseMatrix gram(mc, mc);
  DenseMatrix rhs(mc, data.n);
  for (std::size_t v = 0; v < data.views.size(); ++v) {
    gram = add(gram, gemm(state.anchors[v], state.anchors[v], true, false));
    rhs = add(rhs, gemm(state.anchors[v], data.views[v], true, false));
  }
  add_to_diagonal(gram, hp.lambda2);
  if (hp.lambda2 != 0.0) {
    rhs = add(rhs, scale(gemm(state.anchor_indicator, state.data_indicator, true, false),
                         hp.lambda2));
  }
  state.graph = solve_spd_with_ridge(gram, rhs, hp.ridge_epsilon, "graph update");
  if (hp.simplex_projection) project_columns_onto_simplex(state.graph);
}

void update_anchor_indicator(ModelState& state, const MultiViewDataset& data,
                             const Hyperparams& hp) {
  // P = (lambda1 l I + lambda2 R R^T)^{-1} (lambda1 sum_v U_v^T A_v + lambda2 R Z^T),
  // assuming the bases have orthonormal columns.
  const std::size_t c = data.c;
  const std::size_t mc = state.graph.rows();
  DenseMatrix gram(c, c);
  if (hp.lambda2 != 0.0)
    gram = scale(gemm(state.data_indicator, state.data_indicator, false, true), hp.lambda2);
  add_to_diagonal(gram, hp.lambda1 * static_cast<double>(data.views.size()));

  DenseMatrix rhs(c, mc);
  for (std::size_t v = 0; v < data.views.size(); ++v)
    rhs = add(rhs, gemm(state.bases[v], state.anchors[v], true, false));
  rhs = scale(rhs, hp.lambda1);
  if (hp.lambda2 != 0.0) {
    rhs = add(rhs, scale(gemm(state.data_indicator, state.graph, false, true), hp.lambda2));
  }
  state.anchor_indicator =
      solve_spd_with_ridge(gram, rhs, hp.ridge_epsilon, "anchor indicator update");
}

void update_data_indicator(ModelState& state, const Hyperparams& hp) {
  // R = (P P^T)^{-1} P Z, the least-squares fit of Z by P^T R.
  const DenseMatrix gram = gemm(state.anchor_indicator, state.anchor_indicator, false, true);
  const DenseMatrix rhs = gemm(state.anchor_indicator, state.graph);
  state.data_indicator =
      solve_spd_with_ridge(gram, rhs, hp.ridge_epsilon, "data indicator update");
}

void update_basis(ModelState& state, const Hyperparams& hp) {
  (void)hp;
  // Orthogonal Procrustes per view: U_v = u * vt of the thin SVD of A_v P^T.
  for (std::size_t v = 0; v < state.bases.size(); ++v) {
    const DenseMatrix target = gemm(state.anchors[v], state.anchor_indicator, false, true);
    const SvdFactors f = thin_svd(target);
    state.bases[v] = gemm(f.u, f.vt);
  }
}

ModelState init_state(const MultiViewDataset& data, const Hyperparams& hp,
                      std::uint64_t seed) {
  validate(data, hp);
  const std::size_t mc = anchor_count(data, hp);
  const std::size_t m = static_cast<std::size_t>(hp.anchors_per_cluster);

  ModelState state;
  state.anchors.reserve(data.views.size());
  state.bases.reserve(data.views.size());
  for (const DenseMatrix& x : data.views) {
    state.anchors.emplace_back(x.rows(), mc);
    state.bases.emplace_back(x.rows(), data.c);
  }

  // Anchor indicator: anchor block i belongs to cluster floor(i / m).
  state.anchor_indicator = DenseMatrix(data.c, mc);
  for (std::size_t i = 0; i < mc; ++i) state.anchor_indicator(i / m, i) = 1.0;

  // Graph columns: uniform plus small seeded noise, then simplex-projected.
  Rng graph_rng(Rng::child_seed(seed, kStreamGraphInit));
  state.graph = DenseMatrix(mc, data.n);
  const double uniform_weight = 1.0 / static_cast<double>(mc);
  for (std::size_t j = 0; j < data.n; ++j)
    for (std::size_t i = 0; i < mc; ++i)
      state.graph(i, j) = uniform_weight + graph_rng.uniform(-1e-3, 1e-3);
  project_columns_onto_simplex(state.graph);

  // Data indicator: one-hot from a single k-means pass over the normalized
  // concatenated features.
  const DenseMatrix features = concatenated_normalized_features(data);
  const KmeansResult seeded = kmeans(features, static_cast<int>(data.c), 1,
                                     Rng::child_seed(seed, kStreamIndicatorInit));
  state.data_indicator = DenseMatrix(data.c, data.n);
  for (std::size_t i = 0; i < data.n; ++i)
    state.data_indicator(static_cast<std::size_t>(seeded.labels[i]), i) = 1.0;

  return state;
}

namespace {

template <typename UpdateFn, typename ObjectiveFn>
std::pair<ModelState, FitReport> alternate(const MultiViewDataset& data,
                                           const SolverConfig& config,
                                           UpdateFn&& run_updates,
                                           ObjectiveFn&& value_of) {
  const Hyperparams& hp = config.hp;
  const auto start = std::chrono::steady_clock::now();
  ModelState state = init_state(data, hp, hp.seed);
  FitReport report;
  double previous = value_of(state);
  for (int iter = 0; iter < hp.max_iter; ++iter) {
    try {
      run_updates(state, iter);
    } catch (const Error& e) {
      throw FitError("fit aborted at iteration " + std::to_string(iter + 1) + ": " + e.what(),
                     report.objective_trace);
    }
    state.ensure_consistent(data, hp);
    const double value = value_of(state);
    report.objective_trace.push_back(value);
    report.iterations = iter + 1;
    const double change = relative_change(value, previous);
    previous = value;
    if (!config.run_to_max_iter && change < hp.tol) {
      report.converged = true;
      break;
    }
  }
  report.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {std::move(state), std::move(report)};
}

}  // namespace

std::pair<ModelState, FitReport> fit(const MultiViewDataset& data, const SolverConfig& config) {
  if (config.variant == Variant::kBaselineA) return fit_baseline(data, config);
  validate(data, config.hp);
  require_basis_feasible(data);
  return alternate(
      data, config,
      [&](ModelState& state, int) {
        update_anchors(state, data, config.hp);
        update_graph(state, data, config.hp);
        update_anchor_indicator(state, data, config.hp);
        update_data_indicator(state, config.hp);
        update_basis(state, config.hp);
      },
      [&](const ModelState& state) { return objective(state, data, config.hp); });
}

std::pair<ModelState, FitReport> fit_baseline(const MultiViewDataset& data,
                                              const SolverConfig& config) {
  validate(data, config.hp);
  if (config.variant != Variant::kBaselineA)
    throw ValidationError("variant", "fit_baseline requires the baseline variant");
  if (!config.baseline_gamma || !(*config.baseline_gamma > 0.0))
    throw ValidationError("baseline-gamma", "the baseline variant needs a positive gamma");
  const double gamma = *config.baseline_gamma;
  const Hyperparams& hp = config.hp;

  return alternate(
      data, config,
      [&](ModelState& state, int) {
        // A_v = X_v Z^T (Z Z^T + eps I)^{-1}
        DenseMatrix gram = gemm(state.graph, state.graph, false, true);
        add_to_diagonal(gram, hp.ridge_epsilon);
        for (std::size_t v = 0; v < data.views.size(); ++v) {
          const DenseMatrix target = gemm(data.views[v], state.graph, false, true);
          state.anchors[v] = transpose(spd_solve(gram, transpose(target)));
        }
        // Z = (sum_v A_v^T A_v + gamma I)^{-1} sum_v A_v^T X_v
        const std::size_t mc = state.graph.rows();
        DenseMatrix zgram(mc, mc);
        DenseMatrix rhs(mc, data.n);
        for (std::size_t v = 0; v < data.views.size(); ++v) {
          zgram = add(zgram, gemm(state.anchors[v], state.anchors[v], true, false));
          rhs = add(rhs, gemm(state.anchors[v], data.views[v], true, false));
        }
        add_to_diagonal(zgram, gamma);
        state.graph = solve_spd_with_ridge(zgram, rhs, hp.ridge_epsilon, "baseline graph update");
      },
      [&](const ModelState& state) { return baseline_objective(state, data, gamma); });
}

}  // namespace alpc
