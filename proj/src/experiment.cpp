#include "pkrr/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include "pkrr/rng.hpp"

namespace fs = std::filesystem;

namespace pkrr {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::size_t resolve_workers(std::size_t workers) {
  if (workers > 0) return workers;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

struct ResolvedData {
  Dataset train;
  Dataset test;
};

ResolvedData resolve_dataset(const ExperimentConfig& config) {
  ResolvedData data;
  if (config.use_synthetic) {
    if (config.synth.n < 2) throw ConfigError("synthetic: need n >= 2");
    const Dataset ds = synth_clustered(config.synth.n, config.synth.d, config.synth.c,
                                       config.synth.noise, sub_seed(config.seed, "synth"));
    auto [train, test] =
        shuffle_split(ds, {sub_seed(config.seed, "split"), config.test_fraction});
    data.train = std::move(train);
    data.test = std::move(test);
  } else {
    if (config.train_path.empty()) throw ConfigError("no dataset given");
    data.train = load_libsvm(config.train_path);
    std::string test_path = config.test_path;
    if (test_path.empty() && fs::exists(config.train_path + ".t"))
      test_path = config.train_path + ".t";
    if (!test_path.empty()) {
      data.test = load_libsvm(test_path);
      if (data.test.d < data.train.d) data.test.d = data.train.d;
      else if (data.test.d > data.train.d) data.train.d = data.test.d;
    } else {
      auto [train, test] = shuffle_split(
          data.train, {sub_seed(config.seed, "split"), config.test_fraction});
      data.train = std::move(train);
      data.test = std::move(test);
    }
  }

  if (config.standardize_features) {
    StandardizeResult std_out = standardize(data.train, data.test);
    data.train = std::move(std_out.train);
    data.test = std::move(std_out.test);
  }
  return data;
}

}  // namespace

RunArtifacts cmd_run(const ExperimentConfig& config) {
  if (config.strategies.empty()) throw ConfigError("no strategies selected");
  if (config.p < 1) throw ConfigError("p must be >= 1");
  if (!(config.test_fraction > 0.0 && config.test_fraction < 1.0))
    throw ConfigError("test-fraction must be in (0,1)");
  if (config.out_dir.empty()) throw ConfigError("output directory required");

  const ResolvedData data = resolve_dataset(config);

  const std::vector<double> lambdas =
      config.lambda_grid.empty() ? default_lambda_grid() : config.lambda_grid;
  std::vector<double> sigmas = config.sigma_grid;
  if (sigmas.empty()) {
    if (config.kernel.kind == KernelKind::gaussian)
      sigmas = auto_sigma_grid(data.train, config.seed);
    else
      sigmas = {config.kernel.sigma};
  }

  GridOptions options;
  options.workers = resolve_workers(config.workers);
  options.base_kernel = config.kernel;

  fs::create_directories(config.out_dir);
  RunArtifacts artifacts;

  const std::uint64_t partition_seed = sub_seed(config.seed, "partition");
  for (StrategyKind kind : config.strategies) {
    artifacts.results.push_back(grid_search(kind, data.train, data.test, config.p, lambdas,
                                            sigmas, partition_seed, options));
  }

  // grid_<strategy>.csv: deterministic trace, lambda outer / sigma inner
  for (const GridResult& result : artifacts.results) {
    const std::string path =
        (fs::path(config.out_dir) / ("grid_" + std::string(strategy_name(result.kind)) + ".csv"))
            .string();
    std::ofstream out = open_out(path);
    out << "strategy,p,lambda,sigma,mse,iter_seconds,flops,messages,bytes,failed\n";
    for (const GridCell& cell : result.cells) {
      out << strategy_name(result.kind) << ',' << result.p << ',' << fmt(cell.lambda) << ','
          << fmt(cell.sigma) << ',' << (cell.failed ? "nan" : fmt(cell.mse)) << ','
          << fmt(cell.modeled_seconds) << ',' << cell.flops << ',' << cell.messages << ','
          << cell.bytes << ',' << (cell.failed ? 1 : 0) << '\n';
    }
    artifacts.grid_csv_paths.push_back(path);
  }

  artifacts.summary_csv_path = (fs::path(config.out_dir) / "summary.csv").string();
  {
    std::ofstream out = open_out(artifacts.summary_csv_path);
    out << "strategy,p,best_lambda,best_sigma,best_mse,cells,failed_cells,total_flops,"
           "total_modeled_seconds\n";
    for (const GridResult& result : artifacts.results) {
      std::uint64_t total_flops = 0;
      double total_modeled = 0.0;
      for (const auto& part : result.partitions) {
        total_flops += part.ops.total_flops();
        total_modeled += part.modeled_seconds;
      }
      out << strategy_name(result.kind) << ',' << result.p << ',';
      if (result.has_best())
        out << fmt(result.best().lambda) << ',' << fmt(result.best().sigma) << ','
            << fmt(result.best().mse);
      else
        out << "nan,nan,nan";
      out << ',' << result.cells.size() << ',' << result.failed_cells() << ',' << total_flops
          << ',' << fmt(total_modeled) << '\n';
    }
  }

  artifacts.runstats_csv_path = (fs::path(config.out_dir) / "runstats.csv").string();
  {
    std::ofstream out = open_out(artifacts.runstats_csv_path);
    out << "strategy,p,partition,size,flops,messages,bytes,modeled_seconds\n";
    for (const GridResult& result : artifacts.results) {
      for (std::size_t t = 0; t < result.partitions.size(); ++t) {
        const PartitionTotals& part = result.partitions[t];
        out << strategy_name(result.kind) << ',' << result.p << ',' << t << ',' << part.size
            << ',' << part.ops.total_flops() << ',' << part.ops.messages << ','
            << part.ops.bytes << ',' << fmt(part.modeled_seconds) << '\n';
      }
    }
  }

  // long-format curve: cumulative modeled time vs best-so-far MSE, one row
  // per grid iteration per strategy
  artifacts.curve_csv_path = (fs::path(config.out_dir) / "curve.csv").string();
  {
    std::ofstream out = open_out(artifacts.curve_csv_path);
    out << "strategy,p,iteration,lambda,sigma,cumulative_seconds,mse,best_mse\n";
    for (const GridResult& result : artifacts.results) {
      double cumulative = 0.0;
      double best = std::numeric_limits<double>::quiet_NaN();
      std::size_t iteration = 0;
      for (const GridCell& cell : result.cells) {
        cumulative += cell.modeled_seconds;
        if (!cell.failed && !(best <= cell.mse)) best = cell.mse;
        out << strategy_name(result.kind) << ',' << result.p << ',' << ++iteration << ','
            << fmt(cell.lambda) << ',' << fmt(cell.sigma) << ',' << fmt(cumulative) << ','
            << (cell.failed ? "nan" : fmt(cell.mse)) << ',' << fmt(best) << '\n';
      }
    }
  }

  // wall-clock lives in its own file; everything above is reproducible
  artifacts.timings_csv_path = (fs::path(config.out_dir) / "timings.csv").string();
  {
    std::ofstream out = open_out(artifacts.timings_csv_path);
    out << "strategy,p,lambda,sigma,measured_seconds\n";
    for (const GridResult& result : artifacts.results)
      for (const GridCell& cell : result.cells)
        out << strategy_name(result.kind) << ',' << result.p << ',' << fmt(cell.lambda) << ','
            << fmt(cell.sigma) << ',' << fmt(cell.measured_seconds) << '\n';
  }

  for (const GridResult& result : artifacts.results) {
    std::cout << strategy_name(result.kind) << ": p=" << result.p;
    if (result.has_best())
      std::cout << " best mse=" << result.best().mse << " at lambda=" << result.best().lambda
                << " sigma=" << result.best().sigma;
    else
      std::cout << " (all cells failed)";
    std::cout << " [" << result.cells.size() << " cells, " << result.failed_cells()
              << " failed]\n";
  }
  return artifacts;
}

namespace {

std::vector<WeakScalingRow> model_rows_for(StrategyKind strategy,
                                           const std::vector<std::size_t>& p_list,
                                           std::size_t m) {
  const ScalingCost cost =
      strategy == StrategyKind::exact ? ScalingCost::dkrr : ScalingCost::partitioned;
  const CostModel model;
  std::vector<WeakScalingRow> rows;
  double base_time = 0.0;
  for (std::size_t i = 0; i < p_list.size(); ++i) {
    const std::size_t p = p_list[i];
    const double n = static_cast<double>(m) * static_cast<double>(p);
    const double pd = static_cast<double>(p);
    const double flops =
        cost == ScalingCost::dkrr ? n * n * n / (3.0 * pd) : (n / pd) * (n / pd) * (n / pd) / 3.0;
    WeakScalingRow row;
    row.p = p;
    row.n = m * p;
    row.modeled_seconds = flops * model.gamma;
    if (i == 0) base_time = row.modeled_seconds;
    row.efficiency = base_time / row.modeled_seconds;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

WeakScalingArtifacts cmd_weak_scaling(const WeakScalingConfig& config) {
  if (config.p_list.empty()) throw ConfigError("p list is empty");
  if (config.m < 2) throw ConfigError("need m >= 2 samples per partition");
  if (config.out_dir.empty()) throw ConfigError("output directory required");
  if (!(config.test_fraction > 0.0 && config.test_fraction < 1.0))
    throw ConfigError("test-fraction must be in (0,1)");

  WeakScalingArtifacts artifacts;
  artifacts.model = model_rows_for(config.strategy, config.p_list, config.m);

  for (std::size_t p : config.p_list) {
    const std::size_t n = config.m * p;
    const std::size_t k = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(
               static_cast<double>(n) * config.test_fraction / (1.0 - config.test_fraction))));
    const std::size_t clusters = std::max<std::size_t>(1, p);
    const Dataset all =
        synth_clustered(n + k, config.d, clusters, config.noise,
                        sub_seed(config.seed, "weak-scaling-" + std::to_string(p)));
    std::vector<std::size_t> train_rows(n), test_rows(k);
    for (std::size_t i = 0; i < n; ++i) train_rows[i] = i;
    for (std::size_t j = 0; j < k; ++j) test_rows[j] = n + j;
    StandardizeResult std_out = standardize(subset(all, train_rows), subset(all, test_rows));

    const std::vector<double> sigma_grid = auto_sigma_grid(std_out.train, config.seed);
    const std::vector<double> sigmas = {sigma_grid[4]};  // the median itself
    const std::vector<double> lambdas = {1e-3};

    GridOptions options;
    options.workers = std::max(resolve_workers(config.workers), p);

    double best_measured = std::numeric_limits<double>::infinity();
    double counter_time = 0.0;
    for (std::size_t rep = 0; rep < std::max<std::size_t>(1, config.repeats); ++rep) {
      const GridResult result =
          grid_search(config.strategy, std_out.train, std_out.test, p, lambdas, sigmas,
                      sub_seed(config.seed, "partition"), options);
      if (result.cells[0].failed)
        throw std::runtime_error("weak scaling cell failed: " + result.cells[0].fail_reason);
      best_measured = std::min(best_measured, result.cells[0].measured_seconds);
      counter_time = result.cells[0].modeled_seconds;  // deterministic across repeats
    }
    artifacts.measured_seconds.push_back(best_measured);
    artifacts.counter_seconds.push_back(counter_time);
  }

  fs::create_directories(config.out_dir);
  artifacts.csv_path = (fs::path(config.out_dir) / "weak_scaling.csv").string();
  std::ofstream out = open_out(artifacts.csv_path);
  out << "p,n,modeled_seconds,measured_seconds,efficiency\n";
  for (std::size_t i = 0; i < artifacts.model.size(); ++i) {
    const WeakScalingRow& row = artifacts.model[i];
    out << row.p << ',' << row.n << ',' << fmt(row.modeled_seconds) << ','
        << fmt(artifacts.measured_seconds[i]) << ',' << fmt(row.efficiency) << '\n';
  }

  for (std::size_t i = 0; i < artifacts.model.size(); ++i)
    std::cout << "p=" << artifacts.model[i].p << " n=" << artifacts.model[i].n
              << " modeled=" << artifacts.model[i].modeled_seconds
              << " measured=" << artifacts.measured_seconds[i]
              << " efficiency=" << artifacts.model[i].efficiency << '\n';
  return artifacts;
}

std::vector<ClusterStatsRow> cmd_cluster_stats(const ClusterStatsConfig& config) {
  if (config.k < 1) throw ConfigError("k must be >= 1");
  Dataset ds;
  if (config.use_synthetic) {
    ds = synth_clustered(config.synth.n, config.synth.d, config.synth.c, config.synth.noise,
                         sub_seed(config.seed, "synth"));
  } else {
    if (config.dataset_path.empty()) throw ConfigError("no dataset given");
    ds = load_libsvm(config.dataset_path);
  }

  std::vector<std::string> methods;
  if (config.method == "both")
    methods = {"kmeans", "kbalance"};
  else if (config.method == "kmeans" || config.method == "kbalance")
    methods = {config.method};
  else
    throw ConfigError("method must be kmeans, kbalance, or both");

  const std::uint64_t seed = sub_seed(config.seed, "partition");
  std::vector<ClusterStatsRow> rows;
  for (const std::string& method : methods) {
    const Clustering c = method == "kmeans" ? kmeans(ds, config.k, seed)
                                            : kbalance(ds, config.k, seed);
    ClusterStatsRow row;
    row.method = method;
    row.sizes = c.sizes;
    row.max_size = *std::max_element(c.sizes.begin(), c.sizes.end());
    row.min_size = *std::min_element(c.sizes.begin(), c.sizes.end());
    rows.push_back(row);

    std::cout << method << " sizes:";
    for (std::size_t s : c.sizes) std::cout << ' ' << s;
    std::cout << "  max=" << row.max_size << " min=" << row.min_size << " max/min=";
    if (row.min_size == 0)
      std::cout << "inf";
    else
      std::cout << static_cast<double>(row.max_size) / static_cast<double>(row.min_size);
    std::cout << '\n';
  }

  if (!config.out_path.empty()) {
    std::ofstream out = open_out(config.out_path);
    out << "method,cluster,size\n";
    for (const auto& row : rows)
      for (std::size_t j = 0; j < row.sizes.size(); ++j)
        out << row.method << ',' << j << ',' << row.sizes[j] << '\n';
  }
  return rows;
}

void write_benchmark_datasets(const std::string& dir) {
  struct Standin {
    const char* name;
    std::size_t n_train, n_test, d, c;
    double noise;
    std::uint64_t seed;
  };
  // shapes of the standard regression benchmarks (train/test x dimension)
  const Standin standins[] = {
      {"mg", 1024, 361, 6, 3, 0.05, 101},
      {"space_ga", 2560, 547, 6, 4, 0.05, 202},
      {"cadata", 18432, 2208, 8, 6, 0.1, 303},
  };

  fs::create_directories(dir);
  for (const Standin& s : standins) {
    const std::string train_path = (fs::path(dir) / s.name).string();
    const std::string test_path = train_path + ".t";
    if (fs::exists(train_path) && fs::exists(test_path)) continue;  // keep real data

    const std::size_t total = s.n_train + s.n_test;
    const Dataset all = synth_clustered(total, s.d, s.c, s.noise, s.seed);
    const double tf = static_cast<double>(s.n_test) / static_cast<double>(total);
    auto [train, test] = shuffle_split(all, {s.seed, tf});
    save_libsvm(train, train_path);
    save_libsvm(test, test_path);
  }
}

}  // namespace pkrr
