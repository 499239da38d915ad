#include "alpc/commands.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "alpc/dataset_io.hpp"
#include "alpc/errors.hpp"
#include "alpc/kmeans.hpp"
#include "alpc/metrics.hpp"
#include "alpc/rng.hpp"
#include "alpc/version.hpp"

namespace alpc {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Substream for the final clustering pass, distinct from the init streams.
constexpr std::uint64_t kStreamFinalKmeans = 2;

std::string format_full(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

// Write via a temporary file plus rename so readers never see partial output.
void write_text_atomic(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw DataError("cannot open " + tmp.string() + " for writing");
    out << text;
    if (!out) throw DataError("failed writing " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::string trace_csv_text(const std::vector<double>& trace) {
  std::ostringstream out;
  out << "iteration,objective\n";
  for (std::size_t t = 0; t < trace.size(); ++t)
    out << (t + 1) << "," << format_full(trace[t]) << "\n";
  return out.str();
}

json config_json(const SolverConfig& config) {
  const Hyperparams& hp = config.hp;
  json j{{"variant", config.variant == Variant::kFull ? "full" : "baseline-a"},
         {"lambda1", hp.lambda1},
         {"lambda2", hp.lambda2},
         {"anchors_per_cluster", hp.anchors_per_cluster},
         {"max_iter", hp.max_iter},
         {"tol", hp.tol},
         {"seed", hp.seed},
         {"kmeans_restarts", hp.kmeans_restarts},
         {"simplex_projection", hp.simplex_projection},
         {"reorthonormalize_anchors", hp.reorthonormalize_anchors},
         {"ridge_epsilon", hp.ridge_epsilon}};
  if (config.baseline_gamma)
    j["gamma"] = *config.baseline_gamma;
  else
    j["gamma"] = nullptr;
  return j;
}

json dataset_json(const MultiViewDataset& data, const std::string& path) {
  json dims = json::array();
  for (const DenseMatrix& x : data.views) dims.push_back(x.rows());
  return json{{"path", path},
              {"fingerprint", dataset_fingerprint(data)},
              {"n", data.n},
              {"c", data.c},
              {"view_dims", dims},
              {"has_labels", data.labels.has_value()}};
}

json fit_json(const FitReport& report) {
  json trace = json::array();
  for (double v : report.objective_trace) trace.push_back(v);
  return json{{"iterations", report.iterations},
              {"converged", report.converged},
              {"wall_time_seconds", report.wall_time_seconds},
              {"final_objective",
               report.objective_trace.empty() ? json(nullptr) : json(report.objective_trace.back())},
              {"objective_trace", trace}};
}

json clustering_json(const ClusteringResult& clustering) {
  json j{{"labels", clustering.predicted_labels}};
  if (clustering.metrics) {
    j["metrics"] = {{"acc", clustering.metrics->acc},
                    {"nmi", clustering.metrics->nmi},
                    {"purity", clustering.metrics->purity},
                    {"f_score", clustering.metrics->f_score}};
  } else {
    j["metrics"] = nullptr;
  }
  return j;
}

json run_record(const std::string& command, const MultiViewDataset& data,
                const std::string& dataset_path, const SolverConfig& config,
                const PipelineResult& outcome) {
  return json{{"tool_version", kToolVersion},
              {"command", command},
              {"dataset", dataset_json(data, dataset_path)},
              {"config", config_json(config)},
              {"fit", fit_json(outcome.report)},
              {"clustering", clustering_json(outcome.clustering)}};
}

std::size_t thread_cap(std::size_t jobs) {
  std::size_t cap = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("ALPC_THREADS")) {
    const long parsed = std::strtol(env, nullptr, 10);
    if (parsed >= 1) cap = static_cast<std::size_t>(parsed);
  }
  return std::min(cap, std::max<std::size_t>(jobs, 1));
}

SynthSpec bench_spec(std::size_t n, std::uint64_t seed) {
  SynthSpec spec;
  spec.n = n;
  spec.c = 5;
  spec.l = 3;
  spec.latent_dim = 10;
  spec.view_dims = {20, 30, 40};
  spec.separation = 10.0;
  spec.noise_sigma = 1.0;
  spec.seed = seed;
  return spec;
}

}  // namespace

PipelineResult run_fit_pipeline(const MultiViewDataset& data, const SolverConfig& config) {
  PipelineResult result;
  auto [state, report] = fit(data, config);
  result.state = std::move(state);
  result.report = std::move(report);

  const KmeansResult clusters =
      kmeans(result.state.graph, static_cast<int>(data.c), config.hp.kmeans_restarts,
             Rng::child_seed(config.hp.seed, kStreamFinalKmeans));
  result.clustering.predicted_labels = clusters.labels;
  if (data.labels) {
    ExternalMetrics m;
    m.acc = accuracy(clusters.labels, *data.labels);
    m.nmi = nmi(clusters.labels, *data.labels);
    m.purity = purity(clusters.labels, *data.labels);
    m.f_score = pairwise_f_score(clusters.labels, *data.labels);
    result.clustering.metrics = m;
  }
  return result;
}

json cmd_synth(const SynthOptions& opt) {
  SynthSpec spec;
  spec.n = opt.n;
  spec.c = opt.c;
  spec.l = opt.views;
  spec.latent_dim = opt.latent_dim;
  spec.view_dims = opt.view_dims;
  if (spec.view_dims.empty()) {
    for (std::size_t v = 0; v < opt.views; ++v) spec.view_dims.push_back(20 + 10 * v);
  }
  spec.separation = opt.separation;
  spec.noise_sigma = opt.noise_sigma;
  spec.seed = opt.seed;

  const MultiViewDataset dataset = generate(spec);
  save(dataset, opt.out_dir);

  json dims = json::array();
  for (std::size_t d : spec.view_dims) dims.push_back(d);
  return json{{"tool_version", kToolVersion}, {"command", "synth"},
              {"out", opt.out_dir.string()},  {"fingerprint", dataset_fingerprint(dataset)},
              {"n", spec.n},                  {"c", spec.c},
              {"views", spec.l},              {"view_dims", dims},
              {"seed", spec.seed}};
}

json cmd_fit(const FitOptions& opt) {
  const MultiViewDataset data = load(opt.dataset_dir);
  SolverConfig config;
  config.hp = opt.hp;
  config.variant = opt.variant;
  config.baseline_gamma = opt.gamma;

  const fs::path trace_path =
      opt.trace_csv ? *opt.trace_csv
                    : opt.out_json.parent_path() / (opt.out_json.stem().string() + ".trace.csv");
  try {
    const PipelineResult outcome = run_fit_pipeline(data, config);
    const json record = run_record("fit", data, opt.dataset_dir.string(), config, outcome);
    write_text_atomic(opt.out_json, record.dump(2) + "\n");
    write_text_atomic(trace_path, trace_csv_text(outcome.report.objective_trace));
    return record;
  } catch (const FitError& e) {
    // keep whatever objective values were reached
    write_text_atomic(trace_path, trace_csv_text(e.partial_trace()));
    throw;
  }
}

json cmd_grid(const GridOptions& opt) {
  const MultiViewDataset data = load(opt.dataset_dir);
  if (!data.labels && !opt.select_by_objective)
    throw ArgumentError("grid selection by accuracy needs ground-truth labels; "
                        "use objective-based selection instead");

  struct Cell {
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    int m = 0;
    bool failed = false;
    std::string error;
    json record;
    double acc = 0.0;
    double objective = 0.0;
  };

  std::vector<Cell> cells;
  for (double l1 : opt.lambda1_grid)
    for (double l2 : opt.lambda2_grid)
      for (int m : opt.m_grid) cells.push_back(Cell{l1, l2, m, false, "", {}, 0.0, 0.0});

  std::atomic<std::size_t> cursor{0};
  auto worker = [&]() {
    while (true) {
      const std::size_t i = cursor.fetch_add(1);
      if (i >= cells.size()) break;
      Cell& cell = cells[i];
      SolverConfig config;
      config.hp = opt.hp;
      config.hp.lambda1 = cell.lambda1;
      config.hp.lambda2 = cell.lambda2;
      config.hp.anchors_per_cluster = cell.m;
      try {
        const PipelineResult outcome = run_fit_pipeline(data, config);
        cell.record = run_record("grid-cell", data, opt.dataset_dir.string(), config, outcome);
        cell.acc = outcome.clustering.metrics ? outcome.clustering.metrics->acc : 0.0;
        cell.objective = outcome.report.objective_trace.empty()
                             ? std::numeric_limits<double>::infinity()
                             : outcome.report.objective_trace.back();
      } catch (const std::exception& e) {
        cell.failed = true;
        cell.error = e.what();
      }
    }
  };
  const std::size_t workers = thread_cap(cells.size());
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w + 1 < workers; ++w) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();

  std::ostringstream table;
  table << "lambda1,lambda2,anchors_per_cluster,status,acc,nmi,purity,f_score,"
           "final_objective,iterations,converged,wall_time_seconds\n";
  for (const Cell& cell : cells) {
    table << format_full(cell.lambda1) << "," << format_full(cell.lambda2) << "," << cell.m
          << ",";
    if (cell.failed) {
      std::string tag = cell.error.substr(0, cell.error.find('\n'));
      for (char& ch : tag)
        if (ch == ',') ch = ';';
      table << "error:" << tag << ",,,,,,,\n";
      continue;
    }
    const json& metrics = cell.record["clustering"]["metrics"];
    table << "ok,";
    if (metrics.is_null()) {
      table << ",,,,";
    } else {
      table << format_full(metrics["acc"].get<double>()) << ","
            << format_full(metrics["nmi"].get<double>()) << ","
            << format_full(metrics["purity"].get<double>()) << ","
            << format_full(metrics["f_score"].get<double>()) << ",";
    }
    table << format_full(cell.objective) << "," << cell.record["fit"]["iterations"] << ","
          << (cell.record["fit"]["converged"].get<bool>() ? "true" : "false") << ","
          << format_full(cell.record["fit"]["wall_time_seconds"].get<double>()) << "\n";
  }
  write_text_atomic(opt.table_csv, table.str());

  const Cell* best = nullptr;
  for (const Cell& cell : cells) {
    if (cell.failed) continue;
    if (!best) {
      best = &cell;
      continue;
    }
    if (opt.select_by_objective ? (cell.objective < best->objective) : (cell.acc > best->acc))
      best = &cell;
  }
  if (!best) throw NumericalError("grid: every cell failed");

  json record = best->record;
  record["command"] = "grid";
  record["grid"] = {{"cells", cells.size()},
                    {"selected_by", opt.select_by_objective ? "objective" : "acc"},
                    {"table", opt.table_csv.string()}};
  write_text_atomic(opt.out_json, record.dump(2) + "\n");
  return record;
}

json cmd_ablate(const AblateOptions& opt) {
  const MultiViewDataset data = load(opt.dataset_dir);
  if (!data.labels) throw ArgumentError("ablate needs ground-truth labels");

  SolverConfig full;
  full.hp = opt.hp;
  full.variant = Variant::kFull;

  SolverConfig baseline;
  baseline.hp = opt.hp;
  baseline.variant = Variant::kBaselineA;
  baseline.baseline_gamma = opt.gamma;

  const PipelineResult full_outcome = run_fit_pipeline(data, full);
  const PipelineResult baseline_outcome = run_fit_pipeline(data, baseline);

  const ExternalMetrics& fm = *full_outcome.clustering.metrics;
  const ExternalMetrics& bm = *baseline_outcome.clustering.metrics;
  const json record{
      {"tool_version", kToolVersion},
      {"command", "ablate"},
      {"dataset", dataset_json(data, opt.dataset_dir.string())},
      {"full", run_record("fit", data, opt.dataset_dir.string(), full, full_outcome)},
      {"baseline",
       run_record("fit", data, opt.dataset_dir.string(), baseline, baseline_outcome)},
      {"delta",
       {{"acc", fm.acc - bm.acc},
        {"nmi", fm.nmi - bm.nmi},
        {"purity", fm.purity - bm.purity},
        {"f_score", fm.f_score - bm.f_score}}}};
  write_text_atomic(opt.out_json, record.dump(2) + "\n");
  return record;
}

json cmd_bench(const BenchOptions& opt) {
  if (opt.iterations < 1) throw ArgumentError("bench: iterations must be at least 1");

  json rows = json::array();
  std::ostringstream csv;
  csv << "n,wall_time_seconds\n";
  for (const std::size_t n : opt.sizes) {
    const MultiViewDataset data = generate(bench_spec(n, Rng::child_seed(opt.seed, n)));
    SolverConfig config;
    config.hp.seed = opt.seed;
    config.hp.max_iter = opt.iterations;
    config.run_to_max_iter = true;
    const auto start = std::chrono::steady_clock::now();
    const auto fitted = fit(data, config);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    (void)fitted;
    rows.push_back({{"n", n}, {"wall_time_seconds", seconds}});
    csv << n << "," << format_full(seconds) << "\n";
  }
  write_text_atomic(opt.out_csv, csv.str());
  return json{{"tool_version", kToolVersion},
              {"command", "bench"},
              {"iterations", opt.iterations},
              {"seed", opt.seed},
              {"rows", rows}};
}

json cmd_import(const ImportOptions& opt) {
  const MultiViewDataset dataset =
      import_csv(opt.view_csvs, opt.labels_csv, opt.c, opt.skip_header);
  save(dataset, opt.out_dir);
  return json{{"tool_version", kToolVersion},
              {"command", "import"},
              {"out", opt.out_dir.string()},
              {"fingerprint", dataset_fingerprint(dataset)},
              {"n", dataset.n},
              {"c", dataset.c},
              {"views", dataset.views.size()}};
}

}  // namespace alpc
