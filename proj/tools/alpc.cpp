#include <cstdint>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "alpc/commands.hpp"
#include "alpc/errors.hpp"
#include "alpc/version.hpp"

namespace {

// Exit codes: 0 ok, 1 usage, 2 data, 3 numerical.
constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumerical = 3;

void add_hyperparam_flags(CLI::App* cmd, alpc::Hyperparams& hp) {
  cmd->add_option("--lambda1", hp.lambda1, "anchor-basis coupling weight")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--lambda2", hp.lambda2, "graph-indicator coupling weight")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--anchors-per-cluster", hp.anchors_per_cluster, "anchors per cluster (m)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--max-iter", hp.max_iter, "iteration cap")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--tol", hp.tol, "relative objective-change tolerance")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--seed", hp.seed, "random seed");
  cmd->add_option("--restarts", hp.kmeans_restarts, "k-means restarts")
      ->check(CLI::PositiveNumber);
  cmd->add_flag("--simplex-projection,!--no-simplex-projection", hp.simplex_projection,
                "project graph columns onto the probability simplex");
  cmd->add_flag("--reorthonormalize,!--no-reorthonormalize", hp.reorthonormalize_anchors,
                "keep anchors orthonormal via their polar factor (default on)");
  cmd->add_option("--ridge-epsilon", hp.ridge_epsilon, "diagonal shift for singular solves")
      ->check(CLI::PositiveNumber);
}

void add_variant_flags(CLI::App* cmd, std::string& variant, double& gamma) {
  cmd->add_option("--variant", variant, "solver variant")
      ->check(CLI::IsMember({"full", "baseline-a"}));
  cmd->add_option("--gamma", gamma, "graph ridge weight of the baseline variant")
      ->check(CLI::PositiveNumber);
}

int dispatch(const std::function<nlohmann::json()>& command) {
  try {
    const nlohmann::json record = command();
    std::cout << record.dump(2) << "\n";
    return kExitOk;
  } catch (const alpc::ArgumentError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const alpc::NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const alpc::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multi-view clustering through anchor learning with "
               "potential-cluster constraints"};
  app.set_version_flag("--version", alpc::kToolVersion);
  app.require_subcommand(1);

  // synth
  alpc::SynthOptions synth;
  CLI::App* synth_cmd = app.add_subcommand("synth", "generate a labeled synthetic dataset");
  synth_cmd->add_option("--n", synth.n, "samples")->check(CLI::PositiveNumber);
  synth_cmd->add_option("--c", synth.c, "clusters")->check(CLI::PositiveNumber);
  synth_cmd->add_option("--views", synth.views, "view count")->check(CLI::PositiveNumber);
  synth_cmd->add_option("--latent-dim", synth.latent_dim, "latent dimension")
      ->check(CLI::PositiveNumber);
  synth_cmd->add_option("--view-dims", synth.view_dims,
                        "per-view dimensions (default 20,30,40,...)");
  synth_cmd->add_option("--separation", synth.separation,
                        "cluster separation in noise units")
      ->check(CLI::PositiveNumber);
  synth_cmd->add_option("--noise-sigma", synth.noise_sigma, "noise level")
      ->check(CLI::PositiveNumber);
  synth_cmd->add_option("--seed", synth.seed, "random seed");
  synth_cmd->add_option("--out", synth.out_dir, "output dataset directory")->required();

  // fit
  alpc::FitOptions fit;
  std::string fit_variant = "full";
  double fit_gamma = 1.0;
  std::string fit_trace;
  CLI::App* fit_cmd = app.add_subcommand("fit", "fit the model and cluster the samples");
  fit_cmd->add_option("dataset", fit.dataset_dir, "dataset directory")->required();
  add_hyperparam_flags(fit_cmd, fit.hp);
  add_variant_flags(fit_cmd, fit_variant, fit_gamma);
  fit_cmd->add_option("--out", fit.out_json, "run-record JSON path")->required();
  fit_cmd->add_option("--trace-out", fit_trace, "convergence CSV path");

  // grid
  alpc::GridOptions grid;
  std::string grid_select = "acc";
  CLI::App* grid_cmd = app.add_subcommand("grid", "hyperparameter sweep");
  grid_cmd->add_option("dataset", grid.dataset_dir, "dataset directory")->required();
  add_hyperparam_flags(grid_cmd, grid.hp);
  grid_cmd->add_option("--lambda1-grid", grid.lambda1_grid, "lambda1 values to sweep");
  grid_cmd->add_option("--lambda2-grid", grid.lambda2_grid, "lambda2 values to sweep");
  grid_cmd->add_option("--m-grid", grid.m_grid, "anchors-per-cluster values to sweep");
  grid_cmd->add_option("--select-by", grid_select, "selection criterion")
      ->check(CLI::IsMember({"acc", "objective"}));
  grid_cmd->add_option("--out", grid.out_json, "best run-record JSON path")->required();
  grid_cmd->add_option("--table-out", grid.table_csv, "full sweep CSV path")->required();

  // ablate
  alpc::AblateOptions ablate;
  CLI::App* ablate_cmd =
      app.add_subcommand("ablate", "compare the full model against the ridge baseline");
  ablate_cmd->add_option("dataset", ablate.dataset_dir, "dataset directory")->required();
  add_hyperparam_flags(ablate_cmd, ablate.hp);
  ablate_cmd->add_option("--gamma", ablate.gamma, "baseline graph ridge weight")
      ->check(CLI::PositiveNumber);
  ablate_cmd->add_option("--out", ablate.out_json, "paired run-record JSON path")->required();

  // bench
  alpc::BenchOptions bench;
  CLI::App* bench_cmd = app.add_subcommand("bench", "wall-time scaling over sample counts");
  bench_cmd->add_option("--sizes", bench.sizes, "sample counts to benchmark");
  bench_cmd->add_option("--iters", bench.iterations, "fixed iteration count")
      ->check(CLI::PositiveNumber);
  bench_cmd->add_option("--seed", bench.seed, "random seed");
  bench_cmd->add_option("--out", bench.out_csv, "timing CSV path")->required();

  // import
  alpc::ImportOptions import;
  std::vector<std::string> import_views;
  std::string import_labels;
  CLI::App* import_cmd = app.add_subcommand("import", "convert per-view CSV files");
  import_cmd->add_option("--views", import_views, "one CSV per view, rows are samples")
      ->required();
  import_cmd->add_option("--labels", import_labels, "labels CSV, one integer per row");
  import_cmd->add_option("--c", import.c, "cluster count")->required()->check(CLI::PositiveNumber);
  import_cmd->add_flag("--skip-header", import.skip_header, "drop the first row of every file");
  import_cmd->add_option("--out", import.out_dir, "output dataset directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (synth_cmd->parsed()) return dispatch([&] { return alpc::cmd_synth(synth); });
  if (fit_cmd->parsed()) {
    fit.variant = fit_variant == "full" ? alpc::Variant::kFull : alpc::Variant::kBaselineA;
    if (fit.variant == alpc::Variant::kBaselineA) fit.gamma = fit_gamma;
    if (!fit_trace.empty()) fit.trace_csv = fit_trace;
    return dispatch([&] { return alpc::cmd_fit(fit); });
  }
  if (grid_cmd->parsed()) {
    grid.select_by_objective = grid_select == "objective";
    return dispatch([&] { return alpc::cmd_grid(grid); });
  }
  if (ablate_cmd->parsed()) return dispatch([&] { return alpc::cmd_ablate(ablate); });
  if (bench_cmd->parsed()) return dispatch([&] { return alpc::cmd_bench(bench); });
  if (import_cmd->parsed()) {
    for (const std::string& path : import_views) import.view_csvs.emplace_back(path);
    if (!import_labels.empty()) import.labels_csv = import_labels;
    return dispatch([&] { return alpc::cmd_import(import); });
  }
  return kExitUsage;
}
