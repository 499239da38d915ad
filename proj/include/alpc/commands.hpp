#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include <json.hpp>

#include "alpc/solver.hpp"
#include "alpc/synth.hpp"
#include "alpc/types.hpp"

namespace alpc {

struct SynthOptions {
  std::size_t n = 1000;
  std::size_t c = 5;
  std::size_t views = 3;
  std::size_t latent_dim = 10;
  std::vector<std::size_t> view_dims;  // empty: 20, 30, 40, ...
  double separation = 10.0;
  double noise_sigma = 1.0;
  std::uint64_t seed = 0;
  std::filesystem::path out_dir;
};

struct FitOptions {
  std::filesystem::path dataset_dir;
  Hyperparams hp;
  Variant variant = Variant::kFull;
  std::optional<double> gamma;
  std::filesystem::path out_json;
  std::optional<std::filesystem::path> trace_csv;  // default: <out stem>.trace.csv
};

struct GridOptions {
  std::filesystem::path dataset_dir;
  Hyperparams hp;  // base settings shared by every cell
  std::vector<double> lambda1_grid = {1e-2, 1e-1, 1.0, 1e1, 1e2};
  std::vector<double> lambda2_grid = {1e-4, 1e-3, 1e-2, 1e-1, 1.0};
  std::vector<int> m_grid = {1, 2, 3};
  bool select_by_objective = false;  // default selection is best accuracy
  std::filesystem::path out_json;    // best cell's run record
  std::filesystem::path table_csv;   // one row per cell
};

struct AblateOptions {
  std::filesystem::path dataset_dir;
  Hyperparams hp;
  double gamma = 1.0;
  std::filesystem::path out_json;
};

struct BenchOptions {
  std::vector<std::size_t> sizes = {2500, 5000, 10000, 20000};
  int iterations = 20;  // fixed; convergence early-exit disabled
  std::uint64_t seed = 0;
  std::filesystem::path out_csv;
};

struct ImportOptions {
  std::vector<std::filesystem::path> view_csvs;
  std::optional<std::filesystem::path> labels_csv;
  std::size_t c = 0;
  bool skip_header = false;
  std::filesystem::path out_dir;
};

nlohmann::json cmd_synth(const SynthOptions& opt);
nlohmann::json cmd_fit(const FitOptions& opt);
nlohmann::json cmd_grid(const GridOptions& opt);
nlohmann::json cmd_ablate(const AblateOptions& opt);
nlohmann::json cmd_bench(const BenchOptions& opt);
nlohmann::json cmd_import(const ImportOptions& opt);

// Fit plus k-means on the learned graph plus metrics when ground truth
// exists; the composition behind fit/grid/ablate.
struct PipelineResult {
  ModelState state;
  FitReport report;
  ClusteringResult clustering;
};
PipelineResult run_fit_pipeline(const MultiViewDataset& data, const SolverConfig& config);

}  // namespace alpc
