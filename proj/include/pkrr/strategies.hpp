#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pkrr/clustering.hpp"
#include "pkrr/dataset.hpp"
#include "pkrr/runtime.hpp"
#include "pkrr/solver.hpp"

namespace pkrr {

// The eight methods: exact whole-data KRR, randomly partitioned averaging
// (dckrr), k-means partitions with average / nearest-center / per-sample
// oracle prediction (kkrr, kkrr2, kkrr3), and the same three predictors over
// balanced clusters (bkrr, bkrr2, bkrr3).
enum class StrategyKind { exact, dc, kk, kk2, kk3, bk, bk2, bk3 };

enum class PartitionerKind { whole, random, kmeans, kbalance };
enum class PredictorKind { whole, average, nearest, oracle };

const char* strategy_name(StrategyKind k);                 // "exact", "dckrr", ...
StrategyKind parse_strategy(const std::string& name);      // throws std::invalid_argument
PartitionerKind partitioner_for(StrategyKind k);
PredictorKind predictor_for(StrategyKind k);

struct PartitionSet {
  std::size_t p = 0;
  std::vector<std::vector<std::size_t>> parts;     // disjoint, union = all rows
  std::vector<std::vector<double>> centers;        // empty for whole/random
  bool has_centers() const { return !centers.empty(); }
};

// Exact: one part. Random: contiguous blocks of the seeded shuffle, sizes
// within 1 of n/p. KMeans / KBalance: the clustering's members in row order.
PartitionSet make_partition(StrategyKind kind, const Dataset& train, std::size_t p,
                            std::uint64_t seed);

struct TrainedPartitions {
  std::vector<KrrModel> models;
  RunStats stats;
};

// Trains one independent model per part; solver failures are reported with
// their partition id. Models carry the partition center when defined.
TrainedPartitions train_partitions(const PartitionSet& ps, const Dataset& train,
                                   const KernelSpec& spec, double lambda,
                                   std::size_t workers = 1);

double predict_average(std::span<const KrrModel> models, SparseRow x,
                       OpCount* ops = nullptr);
double predict_nearest(std::span<const KrrModel> models,
                       const std::vector<std::vector<double>>& centers, SparseRow x,
                       OpCount* ops = nullptr);
// Returns the per-model prediction minimizing squared error against y_true
// and the chosen model index (evaluation-time oracle; needs the true label).
std::pair<double, std::size_t> predict_oracle(std::span<const KrrModel> models, SparseRow x,
                                              double y_true, OpCount* ops = nullptr);

double mse(std::span<const double> pred, std::span<const double> truth);

// --- grid search ---

struct GridCell {
  double lambda = 0.0;
  double sigma = 0.0;
  double mse = std::numeric_limits<double>::quiet_NaN();
  bool failed = false;
  std::string fail_reason;
  double modeled_seconds = 0.0;   // alpha-beta-gamma estimate from counters
  double measured_seconds = 0.0;  // wall clock, machine-dependent
  std::uint64_t flops = 0;        // totals across partitions
  std::uint64_t messages = 0;
  std::uint64_t bytes = 0;
  double max_residual = 0.0;      // max over partitions of ||A a - y||/||y||
};

struct PartitionTotals {
  std::size_t size = 0;
  OpCount ops;
  double modeled_seconds = 0.0;
  double measured_seconds = 0.0;
};

struct GridResult {
  StrategyKind kind{};
  std::size_t p = 0;
  std::vector<double> lambdas;
  std::vector<double> sigmas;
  std::vector<GridCell> cells;  // lambda outer, sigma inner
  std::size_t best_index = npos;
  std::vector<PartitionTotals> partitions;

  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();
  bool has_best() const { return best_index != npos; }
  const GridCell& best() const { return cells[best_index]; }
  std::size_t failed_cells() const;
  double max_residual() const;
};

struct GridOptions {
  std::size_t workers = 1;
  KernelSpec base_kernel{};  // sigma is overridden per cell
  CostModel cost{};
};

// Partitions once (partitioning is sigma-independent), then for every
// (lambda, sigma) trains all partitions, predicts the test set with the
// strategy's predictor, and records MSE plus cost counters. Indefinite cells
// are marked failed and excluded from best-selection. The Gram matrix is
// reused across lambda for fixed sigma; its cost is charged to that sigma's
// first-lambda cell.
GridResult grid_search(StrategyKind kind, const Dataset& train, const Dataset& test,
                       std::size_t p, std::span<const double> lambdas,
                       std::span<const double> sigmas, std::uint64_t seed,
                       const GridOptions& options = {});

// {1e-6, ..., 1e-1}, log-spaced.
std::vector<double> default_lambda_grid();

// g * {2^-4, ..., 2^4} where g is the median pairwise distance over a seeded
// 512-sample subsample of the training data.
std::vector<double> auto_sigma_grid(const Dataset& train, std::uint64_t seed);

// Strategy-keyed weak-scaling model: exact maps to the whole-data solve cost,
// every partitioned method to the balanced per-partition cost.
std::vector<WeakScalingRow> weak_scaling_report(StrategyKind kind, std::size_t base_p,
                                                std::size_t base_n, std::size_t steps,
                                                const CostModel& model = {});

}  // namespace pkrr
