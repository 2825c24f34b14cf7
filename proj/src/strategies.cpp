#include "pkrr/strategies.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "pkrr/kernel.hpp"
#include "pkrr/rng.hpp"

namespace pkrr {

const char* strategy_name(StrategyKind k) {
  switch (k) {
    case StrategyKind::exact: return "exact";
    case StrategyKind::dc: return "dckrr";
    case StrategyKind::kk: return "kkrr";
    case StrategyKind::kk2: return "kkrr2";
    case StrategyKind::kk3: return "kkrr3";
    case StrategyKind::bk: return "bkrr";
    case StrategyKind::bk2: return "bkrr2";
    case StrategyKind::bk3: return "bkrr3";
  }
  return "?";
}

StrategyKind parse_strategy(const std::string& name) {
  for (StrategyKind k : {StrategyKind::exact, StrategyKind::dc, StrategyKind::kk,
                         StrategyKind::kk2, StrategyKind::kk3, StrategyKind::bk,
                         StrategyKind::bk2, StrategyKind::bk3}) {
    if (name == strategy_name(k)) return k;
  }
  throw std::invalid_argument("unknown strategy: " + name);
}

PartitionerKind partitioner_for(StrategyKind k) {
  switch (k) {
    case StrategyKind::exact: return PartitionerKind::whole;
    case StrategyKind::dc: return PartitionerKind::random;
    case StrategyKind::kk:
    case StrategyKind::kk2:
    case StrategyKind::kk3: return PartitionerKind::kmeans;
    case StrategyKind::bk:
    case StrategyKind::bk2:
    case StrategyKind::bk3: return PartitionerKind::kbalance;
  }
  return PartitionerKind::whole;
}

PredictorKind predictor_for(StrategyKind k) {
  switch (k) {
    case StrategyKind::exact: return PredictorKind::whole;
    case StrategyKind::dc:
    case StrategyKind::kk:
    case StrategyKind::bk: return PredictorKind::average;
    case StrategyKind::kk2:
    case StrategyKind::bk2: return PredictorKind::nearest;
    case StrategyKind::kk3:
    case StrategyKind::bk3: return PredictorKind::oracle;
  }
  return PredictorKind::whole;
}

PartitionSet make_partition(StrategyKind kind, const Dataset& train, std::size_t p,
                            std::uint64_t seed) {
  const PartitionerKind partitioner = partitioner_for(kind);
  PartitionSet ps;

  if (partitioner == PartitionerKind::whole) {
    ps.p = 1;
    ps.parts.emplace_back(train.n);
    for (std::size_t i = 0; i < train.n; ++i) ps.parts[0][i] = i;
    return ps;
  }

  if (p < 1 || p > train.n) throw std::invalid_argument("partition: need 1 <= p <= n");
  ps.p = p;

  if (partitioner == PartitionerKind::random) {
    // contiguous blocks of the seeded shuffle, sizes within 1 of n/p
    Rng rng(seed);
    const std::vector<std::size_t> perm = random_permutation(train.n, rng);
    const std::size_t base = train.n / p, extra = train.n % p;
    std::size_t at = 0;
    for (std::size_t t = 0; t < p; ++t) {
      const std::size_t size = base + (t < extra ? 1 : 0);
      ps.parts.emplace_back(perm.begin() + at, perm.begin() + at + size);
      at += size;
    }
    return ps;
  }

  const Clustering clusters =
      partitioner == PartitionerKind::kmeans
          ? kmeans(train, static_cast<int>(p), seed)
          : kbalance(train, static_cast<int>(p), seed);
  ps.parts.assign(p, {});
  for (std::size_t i = 0; i < train.n; ++i)
    ps.parts[clusters.membership[i]].push_back(i);
  ps.centers = clusters.centers;
  return ps;
}

TrainedPartitions train_partitions(const PartitionSet& ps, const Dataset& train,
                                   const KernelSpec& spec, double lambda,
                                   std::size_t workers) {
  for (const auto& part : ps.parts)
    if (part.empty()) throw std::invalid_argument("train_partitions: empty part");

  std::vector<std::function<KrrModel(OpCount&)>> tasks;
  tasks.reserve(ps.p);
  for (std::size_t t = 0; t < ps.p; ++t) {
    tasks.push_back([&train, &ps, &spec, lambda, t](OpCount& ops) {
      return train_krr(subset(train, ps.parts[t]), spec, lambda, &ops);
    });
  }
  auto outcome = run_partitions(std::move(tasks), workers);

  std::string failures;
  for (std::size_t t = 0; t < ps.p; ++t) {
    if (outcome.errors[t].empty()) continue;
    if (!failures.empty()) failures += "; ";
    failures += "partition " + std::to_string(t) + ": " + outcome.errors[t];
  }
  if (!failures.empty()) throw std::runtime_error(failures);

  TrainedPartitions out;
  out.models = std::move(outcome.results);
  out.stats = std::move(outcome.stats);
  if (ps.has_centers())
    for (std::size_t t = 0; t < ps.p; ++t) out.models[t].center = ps.centers[t];
  return out;
}

double predict_average(std::span<const KrrModel> models, SparseRow x, OpCount* ops) {
  if (models.empty()) throw std::invalid_argument("predict_average: no models");
  double sum = 0.0;
  for (const KrrModel& m : models) sum += m.predict(x, ops);
  return sum / static_cast<double>(models.size());
}

double predict_nearest(std::span<const KrrModel> models,
                       const std::vector<std::vector<double>>& centers, SparseRow x,
                       OpCount* ops) {
  if (models.empty()) throw std::invalid_argument("predict_nearest: no models");
  if (centers.size() != models.size())
    throw std::invalid_argument("predict_nearest: centers undefined for this partitioning");
  return models[nearest_center(centers, x)].predict(x, ops);
}

std::pair<double, std::size_t> predict_oracle(std::span<const KrrModel> models, SparseRow x,
                                              double y_true, OpCount* ops) {
  if (models.empty()) throw std::invalid_argument("predict_oracle: no models");
  double best_pred = 0.0, best_err = std::numeric_limits<double>::infinity();
  std::size_t best_t = 0;
  for (std::size_t t = 0; t < models.size(); ++t) {
    const double pred = models[t].predict(x, ops);
    const double err = (pred - y_true) * (pred - y_true);
    if (err < best_err) {
      best_err = err;
      best_pred = pred;
      best_t = t;
    }
  }
  return {best_pred, best_t};
}

double mse(std::span<const double> pred, std::span<const double> truth) {
  if (pred.size() != truth.size() || pred.empty())
    throw std::invalid_argument("mse: length mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double diff = pred[i] - truth[i];
    sum += diff * diff;
  }
  return sum / static_cast<double>(pred.size());
}

std::size_t GridResult::failed_cells() const {
  std::size_t count = 0;
  for (const auto& c : cells) count += c.failed ? 1 : 0;
  return count;
}

double GridResult::max_residual() const {
  double r = 0.0;
  for (const auto& c : cells)
    if (!c.failed && c.max_residual > r) r = c.max_residual;
  return r;
}

std::vector<double> default_lambda_grid() {
  return {1e-6, 1e-5, 1e-4, 1e-3, 1e-2, 1e-1};
}

std::vector<WeakScalingRow> weak_scaling_report(StrategyKind kind, std::size_t base_p,
                                                std::size_t base_n, std::size_t steps,
                                                const CostModel& model) {
  const ScalingCost cost =
      kind == StrategyKind::exact ? ScalingCost::dkrr : ScalingCost::partitioned;
  return weak_scaling_report(cost, base_p, base_n, steps, model);
}

std::vector<double> auto_sigma_grid(const Dataset& train, std::uint64_t seed) {
  const std::size_t count = std::min<std::size_t>(train.n, 512);
  Rng rng(sub_seed(seed, "sigma-grid"));
  std::vector<std::size_t> perm = random_permutation(train.n, rng);
  perm.resize(count);

  std::vector<double> norms(count);
  for (std::size_t i = 0; i < count; ++i) norms[i] = squared_norm(train.row(perm[i]));

  std::vector<double> dists;
  dists.reserve(count * (count - 1) / 2);
  for (std::size_t i = 0; i < count; ++i) {
    const SparseRow ri = train.row(perm[i]);
    for (std::size_t j = i + 1; j < count; ++j) {
      double d2 = norms[i] + norms[j] - 2.0 * sparse_dot(ri, train.row(perm[j]));
      if (d2 < 0.0) d2 = 0.0;
      dists.push_back(std::sqrt(d2));
    }
  }

  double g = 1.0;
  if (!dists.empty()) {
    std::sort(dists.begin(), dists.end());
    const double median = dists[(dists.size() - 1) / 2];  // lower median
    if (median > 0.0) g = median;
  }

  std::vector<double> grid;
  for (int e = -4; e <= 4; ++e) grid.push_back(g * std::ldexp(1.0, e));
  return grid;
}

// ---------------------------------------------------------------------------
// grid search
// ---------------------------------------------------------------------------

namespace {

struct LambdaSlice {
  bool failed = false;
  std::string fail_reason;
  std::vector<double> predictions;  // over the partition's target rows
  double residual = 0.0;
  double seconds = 0.0;
  OpCount ops;
};

struct SigmaTaskResult {
  double gram_seconds = 0.0;
  OpCount gram_ops;
  std::vector<LambdaSlice> slices;
};

double now_seconds() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

// One partition's work for a fixed sigma: Gram once, then per lambda
// assemble/factor/solve and predict the partition's target rows.
SigmaTaskResult run_sigma_task(const Dataset& part, const KernelSpec& spec,
                               std::span<const double> lambdas, const Dataset& test,
                               const std::vector<std::size_t>& targets, OpCount& task_ops) {
  SigmaTaskResult out;
  const std::size_t m = part.n;
  const bool gaussian = spec.kind == KernelKind::gaussian;

  const double t_gram0 = now_seconds();
  OpCount gram_ops;
  const Matrix K = gram(spec, part, part, &gram_ops);

  // cross kernel against the target rows, reused by every lambda
  std::vector<double> part_norms(m), target_norms(targets.size());
  if (gaussian) {
    for (std::size_t i = 0; i < m; ++i) part_norms[i] = squared_norm(part.row(i));
    for (std::size_t j = 0; j < targets.size(); ++j)
      target_norms[j] = squared_norm(test.row(targets[j]));
    gram_ops.gram_flops += 2 * (m + targets.size());
  }
  Matrix cross(targets.size(), m);
  for (std::size_t j = 0; j < targets.size(); ++j) {
    const SparseRow xt = test.row(targets[j]);
    double* row = cross.row_ptr(j);
    for (std::size_t i = 0; i < m; ++i) {
      const SparseRow xi = part.row(i);
      row[i] = kernel_eval_cached(spec, xi, gaussian ? part_norms[i] : 0.0, xt,
                                  gaussian ? target_norms[j] : 0.0);
      gram_ops.gram_flops += kernel_eval_flops(spec, xi.nnz(), xt.nnz());
    }
  }
  out.gram_seconds = now_seconds() - t_gram0;
  out.gram_ops = gram_ops;
  task_ops += gram_ops;

  out.slices.resize(lambdas.size());
  for (std::size_t li = 0; li < lambdas.size(); ++li) {
    LambdaSlice& slice = out.slices[li];
    const double t0 = now_seconds();
    OpCount ops;
    try {
      Matrix A = assemble_system(K, lambdas[li], m);
      ops.solve_flops += m;
      CholeskyFactor F = cholesky(std::move(A), &ops);
      const std::vector<double> alpha = solve_spd(F, part.y, &ops);

      // residual of the shifted system (verification, uncharged)
      const double shift = lambdas[li] * static_cast<double>(m);
      double res_sq = 0.0, y_sq = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        double acc = shift * alpha[i] - part.y[i];
        const double* row = K.row_ptr(i);
        for (std::size_t jj = 0; jj < m; ++jj) acc += row[jj] * alpha[jj];
        res_sq += acc * acc;
        y_sq += part.y[i] * part.y[i];
      }
      slice.residual = y_sq > 0.0 ? std::sqrt(res_sq / y_sq) : std::sqrt(res_sq);

      slice.predictions.resize(targets.size());
      for (std::size_t j = 0; j < targets.size(); ++j) {
        const double* row = cross.row_ptr(j);
        double acc = 0.0;
        for (std::size_t i = 0; i < m; ++i) acc += row[i] * alpha[i];
        slice.predictions[j] = acc;
      }
      ops.predict_flops += 2 * static_cast<std::uint64_t>(targets.size()) * m;
    } catch (const NotPositiveDefinite& e) {
      slice.failed = true;
      slice.fail_reason = e.what();
    }
    slice.seconds = now_seconds() - t0;
    slice.ops = ops;
    task_ops += ops;
  }
  return out;
}

}  // namespace

GridResult grid_search(StrategyKind kind, const Dataset& train, const Dataset& test,
                       std::size_t p, std::span<const double> lambdas,
                       std::span<const double> sigmas, std::uint64_t seed,
                       const GridOptions& options) {
  if (lambdas.empty() || sigmas.empty())
    throw std::invalid_argument("grid_search: empty grid");
  if (train.n == 0 || test.n == 0)
    throw std::invalid_argument("grid_search: empty dataset");

  const PredictorKind predictor = predictor_for(kind);
  const PartitionSet ps = make_partition(kind, train, p, seed);

  GridResult result;
  result.kind = kind;
  result.p = ps.p;
  result.lambdas.assign(lambdas.begin(), lambdas.end());
  result.sigmas.assign(sigmas.begin(), sigmas.end());
  result.cells.resize(lambdas.size() * sigmas.size());
  result.partitions.resize(ps.p);
  for (std::size_t t = 0; t < ps.p; ++t)
    result.partitions[t].size = ps.parts[t].size();

  std::vector<Dataset> part_data;
  part_data.reserve(ps.p);
  for (std::size_t t = 0; t < ps.p; ++t) part_data.push_back(subset(train, ps.parts[t]));

  // target rows per partition: everything, or the nearest-center share
  std::vector<std::vector<std::size_t>> targets(ps.p);
  if (predictor == PredictorKind::nearest) {
    if (!ps.has_centers())
      throw std::invalid_argument("grid_search: nearest predictor needs centers");
    for (std::size_t j = 0; j < test.n; ++j)
      targets[nearest_center(ps.centers, test.row(j))].push_back(j);
  } else {
    for (std::size_t t = 0; t < ps.p; ++t) {
      targets[t].resize(test.n);
      for (std::size_t j = 0; j < test.n; ++j) targets[t][j] = j;
    }
  }

  const std::size_t k_test = test.n;
  std::vector<double> pred(k_test);

  for (std::size_t si = 0; si < sigmas.size(); ++si) {
    KernelSpec spec = options.base_kernel;
    spec.sigma = sigmas[si];

    std::vector<std::function<SigmaTaskResult(OpCount&)>> tasks;
    tasks.reserve(ps.p);
    for (std::size_t t = 0; t < ps.p; ++t) {
      tasks.push_back([&, t](OpCount& ops) {
        return run_sigma_task(part_data[t], spec, lambdas, test, targets[t], ops);
      });
    }
    auto outcome = run_partitions(std::move(tasks), options.workers);
    for (std::size_t t = 0; t < ps.p; ++t) {
      if (!outcome.errors[t].empty())
        throw std::runtime_error("partition " + std::to_string(t) + ": " +
                                 outcome.errors[t]);
    }

    for (std::size_t li = 0; li < lambdas.size(); ++li) {
      GridCell& cell = result.cells[li * sigmas.size() + si];
      cell.lambda = lambdas[li];
      cell.sigma = sigmas[si];

      double measured = 0.0, modeled = 0.0;
      for (std::size_t t = 0; t < ps.p; ++t) {
        const SigmaTaskResult& task = outcome.results[t];
        const LambdaSlice& slice = task.slices[li];

        if (slice.failed && !cell.failed) {
          cell.failed = true;
          cell.fail_reason = "partition " + std::to_string(t) + ": " + slice.fail_reason;
        }
        if (slice.residual > cell.max_residual) cell.max_residual = slice.residual;

        OpCount cell_ops = slice.ops;
        if (li == 0) cell_ops += task.gram_ops;  // Gram charged to the first lambda
        if (ps.p > 1) {
          switch (predictor) {
            case PredictorKind::average:
              cell_ops.messages += 1;
              cell_ops.bytes += 8 * k_test;
              break;
            case PredictorKind::nearest:
              cell_ops.messages += 1;
              cell_ops.bytes += 8;
              break;
            case PredictorKind::oracle:
              cell_ops.messages += k_test;
              cell_ops.bytes += 8 * k_test;
              break;
            case PredictorKind::whole:
              break;
          }
        }

        cell.flops += cell_ops.total_flops();
        cell.messages += cell_ops.messages;
        cell.bytes += cell_ops.bytes;
        const double machine_time = estimate_time(options.cost, cell_ops);
        if (machine_time > modeled) modeled = machine_time;
        const double machine_measured = slice.seconds + (li == 0 ? task.gram_seconds : 0.0);
        if (machine_measured > measured) measured = machine_measured;

        PartitionTotals& totals = result.partitions[t];
        totals.ops += cell_ops;
        totals.modeled_seconds += machine_time;
        totals.measured_seconds += machine_measured;
      }
      cell.modeled_seconds = modeled;
      cell.measured_seconds = measured;
      if (cell.failed) continue;

      // combine predictions in fixed partition order
      switch (predictor) {
        case PredictorKind::whole:
          pred = outcome.results[0].slices[li].predictions;
          break;
        case PredictorKind::average: {
          std::fill(pred.begin(), pred.end(), 0.0);
          for (std::size_t t = 0; t < ps.p; ++t) {
            const auto& ptd = outcome.results[t].slices[li].predictions;
            for (std::size_t j = 0; j < k_test; ++j) pred[j] += ptd[j];
          }
          const double inv_p = 1.0 / static_cast<double>(ps.p);
          for (double& v : pred) v *= inv_p;
          break;
        }
        case PredictorKind::nearest:
          for (std::size_t t = 0; t < ps.p; ++t) {
            const auto& ptd = outcome.results[t].slices[li].predictions;
            for (std::size_t j = 0; j < targets[t].size(); ++j)
              pred[targets[t][j]] = ptd[j];
          }
          break;
        case PredictorKind::oracle:
          for (std::size_t j = 0; j < k_test; ++j) {
            double best_pred = 0.0, best_err = std::numeric_limits<double>::infinity();
            for (std::size_t t = 0; t < ps.p; ++t) {
              const double v = outcome.results[t].slices[li].predictions[j];
              const double err = (v - test.y[j]) * (v - test.y[j]);
              if (err < best_err) {
                best_err = err;
                best_pred = v;
              }
            }
            pred[j] = best_pred;
          }
          break;
      }
      cell.mse = mse(pred, test.y);
    }
  }

  // best cell in trace order (lambda outer, sigma inner), failed cells skipped
  for (std::size_t i = 0; i < result.cells.size(); ++i) {
    const GridCell& cell = result.cells[i];
    if (cell.failed) continue;
    if (result.best_index == GridResult::npos || cell.mse < result.cells[result.best_index].mse)
      result.best_index = i;
  }
  return result;
}

}  // namespace pkrr
