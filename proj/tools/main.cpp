#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "pkrr/experiment.hpp"

namespace {

// exit codes: 0 success, 1 usage error, 2 runtime error
constexpr int kUsageError = 1;
constexpr int kRuntimeError = 2;

// Expands `--config FILE` into --key=value tokens inserted right after the
// subcommand, so explicit flags (parsed take-last) override file values.
std::vector<std::string> expand_config(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::string config_path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size())
      config_path = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0)
      config_path = args[i].substr(9);
  }
  if (config_path.empty()) return args;

  std::ifstream in(config_path);
  if (!in) throw pkrr::ConfigError("cannot open config file " + config_path);
  std::vector<std::string> tokens;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t begin = line.find_first_not_of(" \t\r");
    if (begin == std::string::npos || line[begin] == '#') continue;
    const std::size_t eq = line.find('=', begin);
    if (eq == std::string::npos)
      throw pkrr::ConfigError(config_path + ":" + std::to_string(line_no) +
                              ": expected key=value");
    std::string key = line.substr(begin, eq - begin);
    while (!key.empty() && (key.back() == ' ' || key.back() == '\t')) key.pop_back();
    std::string value = line.substr(eq + 1);
    while (!value.empty() && (value.back() == '\r' || value.back() == ' ')) value.pop_back();
    const std::size_t vbegin = value.find_first_not_of(" \t");
    value = vbegin == std::string::npos ? "" : value.substr(vbegin);
    tokens.push_back("--" + key + "=" + value);
  }

  // insert after the subcommand token
  std::vector<std::string> out;
  out.reserve(args.size() + tokens.size());
  std::size_t at = 0;
  if (!args.empty() && !args[0].empty() && args[0][0] != '-') {
    out.push_back(args[0]);
    at = 1;
  }
  out.insert(out.end(), tokens.begin(), tokens.end());
  out.insert(out.end(), args.begin() + at, args.end());
  return out;
}

std::vector<double> parse_grid(const std::string& csv, const char* what) {
  std::vector<double> out;
  std::size_t at = 0;
  while (at < csv.size()) {
    std::size_t comma = csv.find(',', at);
    if (comma == std::string::npos) comma = csv.size();
    const std::string token = csv.substr(at, comma - at);
    try {
      out.push_back(std::stod(token));
    } catch (const std::exception&) {
      throw pkrr::ConfigError(std::string(what) + ": bad value '" + token + "'");
    }
    at = comma + 1;
  }
  if (out.empty()) throw pkrr::ConfigError(std::string(what) + ": empty grid");
  return out;
}

pkrr::SynthSpec parse_synth(const std::string& spec) {
  // n,d,c,noise
  const std::vector<double> v = parse_grid(spec, "--synthetic");
  if (v.size() != 4) throw pkrr::ConfigError("--synthetic wants n,d,c,noise");
  pkrr::SynthSpec out;
  out.n = static_cast<std::size_t>(v[0]);
  out.d = static_cast<std::size_t>(v[1]);
  out.c = static_cast<std::size_t>(v[2]);
  out.noise = v[3];
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"partitioned kernel ridge regression benchmark"};
  app.require_subcommand(1);

  std::string config_file;  // handled by expand_config before parsing

  // --- run ---
  auto* run = app.add_subcommand("run", "grid-search one or more strategies on a dataset");
  run->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  std::string dataset, test_dataset, synthetic, strategies_csv = "bkrr2";
  std::string lambda_grid_csv, sigma_grid_csv = "auto", kernel_name = "gaussian";
  std::string out_dir;
  std::size_t p = 1, workers = 1;
  std::uint64_t seed = 1;
  double test_fraction = 0.2, kernel_a = 1.0, kernel_r = 0.0;
  int kernel_degree = 2;
  bool no_standardize = false;

  run->add_option("--config", config_file, "key=value file; flags override it");
  run->add_option("--dataset", dataset, "training file (test defaults to <dataset>.t)");
  run->add_option("--test", test_dataset, "test file");
  run->add_option("--synthetic", synthetic, "generate data: n,d,c,noise");
  run->add_option("--strategy", strategies_csv,
                  "comma list of exact,dckrr,kkrr,kkrr2,kkrr3,bkrr,bkrr2,bkrr3");
  run->add_option("--p", p, "partition count");
  run->add_option("--lambda-grid", lambda_grid_csv, "comma list (default 1e-6..1e-1)");
  run->add_option("--sigma-grid", sigma_grid_csv, "auto or comma list");
  run->add_option("--seed", seed, "root seed");
  run->add_option("--workers", workers, "worker threads (0 = hardware)");
  run->add_option("--out", out_dir, "output directory")->required();
  run->add_option("--test-fraction", test_fraction, "split fraction when no test file");
  run->add_flag("--no-standardize", no_standardize, "skip feature standardization");
  run->add_option("--kernel", kernel_name, "linear|polynomial|gaussian|sigmoid");
  run->add_option("--kernel-a", kernel_a, "polynomial/sigmoid scale");
  run->add_option("--kernel-r", kernel_r, "polynomial/sigmoid offset");
  run->add_option("--kernel-degree", kernel_degree, "polynomial degree");

  // --- weak-scaling ---
  auto* weak = app.add_subcommand("weak-scaling", "p sweep with fixed samples per partition");
  weak->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  std::string weak_p_csv = "1,2,4,8", weak_strategy = "bkrr2", weak_out;
  std::size_t weak_m = 256, weak_d = 8, weak_workers = 1, weak_repeats = 3;
  std::uint64_t weak_seed = 1;
  double weak_noise = 0.1;

  weak->add_option("--config", config_file, "key=value file; flags override it");
  weak->add_option("--m", weak_m, "samples per partition");
  weak->add_option("--p-list", weak_p_csv, "comma list of partition counts");
  weak->add_option("--strategy", weak_strategy, "strategy to time");
  weak->add_option("--d", weak_d, "synthetic dimension");
  weak->add_option("--noise", weak_noise, "synthetic label noise");
  weak->add_option("--seed", weak_seed, "root seed");
  weak->add_option("--workers", weak_workers, "worker threads (0 = hardware)");
  weak->add_option("--repeats", weak_repeats, "timing repeats, min is kept");
  weak->add_option("--out", weak_out, "output directory")->required();

  // --- cluster-stats ---
  auto* stats = app.add_subcommand("cluster-stats", "cluster size balance of kmeans vs kbalance");
  stats->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  std::string stats_dataset, stats_synthetic, stats_method = "both", stats_out;
  int stats_k = 8;
  std::uint64_t stats_seed = 1;

  stats->add_option("--config", config_file, "key=value file; flags override it");
  stats->add_option("--dataset", stats_dataset, "dataset file");
  stats->add_option("--synthetic", stats_synthetic, "generate data: n,d,c,noise");
  stats->add_option("--k", stats_k, "cluster count");
  stats->add_option("--method", stats_method, "kmeans|kbalance|both");
  stats->add_option("--seed", stats_seed, "root seed");
  stats->add_option("--out", stats_out, "optional CSV path");

  // --- prepare ---
  auto* prepare = app.add_subcommand("prepare", "write benchmark dataset files");
  std::string prepare_dir = "data";
  prepare->add_option("--out", prepare_dir, "target directory");

  try {
    std::vector<std::string> args = expand_config(argc, argv);
    std::reverse(args.begin(), args.end());  // CLI11's vector overload pops from the back
    app.parse(args);
  } catch (const pkrr::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  try {
    if (*run) {
      pkrr::ExperimentConfig config;
      config.train_path = dataset;
      config.test_path = test_dataset;
      if (!synthetic.empty()) {
        config.use_synthetic = true;
        config.synth = parse_synth(synthetic);
      }
      std::size_t at = 0;
      while (at < strategies_csv.size()) {
        std::size_t comma = strategies_csv.find(',', at);
        if (comma == std::string::npos) comma = strategies_csv.size();
        config.strategies.push_back(pkrr::parse_strategy(strategies_csv.substr(at, comma - at)));
        at = comma + 1;
      }
      config.p = p;
      if (!lambda_grid_csv.empty() && lambda_grid_csv != "default")
        config.lambda_grid = parse_grid(lambda_grid_csv, "--lambda-grid");
      if (sigma_grid_csv != "auto") config.sigma_grid = parse_grid(sigma_grid_csv, "--sigma-grid");
      config.seed = seed;
      config.workers = workers;
      config.out_dir = out_dir;
      config.test_fraction = test_fraction;
      config.standardize_features = !no_standardize;
      config.kernel.kind = pkrr::parse_kernel(kernel_name);
      config.kernel.a = kernel_a;
      config.kernel.r = kernel_r;
      config.kernel.degree = kernel_degree;
      pkrr::cmd_run(config);
    } else if (*weak) {
      pkrr::WeakScalingConfig config;
      config.m = weak_m;
      config.p_list.clear();
      for (double v : parse_grid(weak_p_csv, "--p-list"))
        config.p_list.push_back(static_cast<std::size_t>(v));
      config.strategy = pkrr::parse_strategy(weak_strategy);
      config.d = weak_d;
      config.noise = weak_noise;
      config.seed = weak_seed;
      config.workers = weak_workers;
      config.repeats = weak_repeats;
      config.out_dir = weak_out;
      pkrr::cmd_weak_scaling(config);
    } else if (*stats) {
      pkrr::ClusterStatsConfig config;
      config.dataset_path = stats_dataset;
      if (!stats_synthetic.empty()) {
        config.use_synthetic = true;
        config.synth = parse_synth(stats_synthetic);
      }
      config.k = stats_k;
      config.method = stats_method;
      config.seed = stats_seed;
      config.out_path = stats_out;
      pkrr::cmd_cluster_stats(config);
    } else if (*prepare) {
      pkrr::write_benchmark_datasets(prepare_dir);
      std::cout << "datasets ready under " << prepare_dir << '\n';
    }
  } catch (const pkrr::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
  return 0;
}
