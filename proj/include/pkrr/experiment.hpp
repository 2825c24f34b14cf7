#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pkrr/strategies.hpp"

namespace pkrr {

// Invalid configuration (usage error, CLI exit code 1). IO and solver
// problems raise std::runtime_error instead (exit code 2).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct SynthSpec {
  std::size_t n = 0;
  std::size_t d = 0;
  std::size_t c = 1;
  double noise = 0.0;
};

struct ExperimentConfig {
  std::string train_path;  // test defaults to "<train>.t" when test_path empty
  std::string test_path;
  bool use_synthetic = false;
  SynthSpec synth;

  std::vector<StrategyKind> strategies;
  std::size_t p = 1;
  std::vector<double> lambda_grid;  // empty -> default grid
  std::vector<double> sigma_grid;   // empty -> auto grid
  std::uint64_t seed = 1;
  std::size_t workers = 1;
  std::string out_dir;
  double test_fraction = 0.2;  // used when no test file is given / synthetic
  bool standardize_features = true;
  KernelSpec kernel;
};

struct RunArtifacts {
  std::vector<GridResult> results;
  std::vector<std::string> grid_csv_paths;
  std::string summary_csv_path;
  std::string runstats_csv_path;
  std::string curve_csv_path;  // long-format time-vs-MSE rows, plot-ready
  std::string timings_csv_path;
};

// Runs every configured strategy on the resolved dataset and writes
// grid_<strategy>.csv, summary.csv, runstats.csv (all deterministic for a
// fixed config) plus timings.csv (wall clock, machine-dependent).
RunArtifacts cmd_run(const ExperimentConfig& config);

struct WeakScalingConfig {
  std::size_t m = 256;                        // samples per partition, fixed
  std::vector<std::size_t> p_list{1, 2, 4, 8};
  StrategyKind strategy = StrategyKind::bk2;
  std::size_t d = 8;
  double noise = 0.1;
  double test_fraction = 0.2;
  std::uint64_t seed = 1;
  std::size_t workers = 1;
  std::size_t repeats = 3;  // measured time = min over repeats
  std::string out_dir;
};

struct WeakScalingArtifacts {
  std::vector<WeakScalingRow> model;      // p,n,modeled_seconds,efficiency
  std::vector<double> measured_seconds;   // per step
  std::vector<double> counter_seconds;    // deterministic per-iteration estimate
  std::string csv_path;
};

// Weak-scaling sweep over p with n = m*p synthetic samples per step: emits
// `p,n,modeled_seconds,measured_seconds,efficiency` and measures one grid
// iteration per step.
WeakScalingArtifacts cmd_weak_scaling(const WeakScalingConfig& config);

struct ClusterStatsConfig {
  std::string dataset_path;
  bool use_synthetic = false;
  SynthSpec synth;
  int k = 2;
  std::string method = "both";  // kmeans | kbalance | both
  std::uint64_t seed = 1;
  std::string out_path;  // optional CSV
};

struct ClusterStatsRow {
  std::string method;
  std::vector<std::size_t> sizes;
  std::size_t max_size = 0;
  std::size_t min_size = 0;
};

std::vector<ClusterStatsRow> cmd_cluster_stats(const ClusterStatsConfig& config);

// Writes the six benchmark files (mg, mg.t, space_ga, space_ga.t, cadata,
// cadata.t) as deterministic synthetic stand-ins with the standard shapes:
// 1024/361 x 6, 2560/547 x 6, 18432/2208 x 8. Existing files are kept, so
// real downloads can be dropped in.
void write_benchmark_datasets(const std::string& dir);

}  // namespace pkrr
