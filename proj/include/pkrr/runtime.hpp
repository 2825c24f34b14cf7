#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "pkrr/ops.hpp"

namespace pkrr {

// alpha-beta-gamma machine model: message latency, per-byte time, per-flop
// time. Defaults are published interconnect/processor constants.
struct CostModel {
  double alpha = 7.2e-6;
  double beta = 0.9e-9;
  double gamma = 2e-11;
};

// f*gamma + n_m*(alpha + n_b*beta)
double estimate_time(const CostModel& model, double flops, double messages,
                     double bytes_per_message);

// Time for `ops` on one machine: flops at gamma plus `messages` equal-sized
// messages carrying `bytes` in total.
double estimate_time(const CostModel& model, const OpCount& ops);

enum class SpeedupVariant { bk2_vs_dkrr, bk2_2x_vs_dkrr };

// Training-cost ratio of the whole-data solve spread over p machines versus
// independent per-partition solves: (n^3/p) / ((n/p)^3) = p^2, or p^2/8 when
// the partitioned method doubles its data.
double theoretical_speedup(std::size_t n, std::size_t p, SpeedupVariant variant);

struct TaskStats {
  double wall_seconds = 0.0;
  OpCount ops;
};

struct RunStats {
  std::vector<TaskStats> per_task;
  double max_wall_seconds = 0.0;  // critical path
  double total_wall_seconds = 0.0;
  OpCount totals;

  void finalize();
};

template <typename R>
struct ParallelOutcome {
  std::vector<R> results;           // task order, independent of scheduling
  std::vector<std::string> errors;  // per task; empty string means success
  RunStats stats;

  bool all_ok() const {
    for (const auto& e : errors)
      if (!e.empty()) return false;
    return true;
  }
};

// Runs independent tasks on a pool of `workers` threads. Each task gets its
// own counter slot and timer; failures are collected per task id and the
// remaining tasks still complete. Results are keyed by task index, so output
// is identical for any worker count.
template <typename R>
ParallelOutcome<R> run_partitions(std::vector<std::function<R(OpCount&)>> tasks,
                                  std::size_t workers) {
  const std::size_t count = tasks.size();
  ParallelOutcome<R> out;
  out.results.resize(count);
  out.errors.resize(count);
  out.stats.per_task.resize(count);

  auto run_one = [&](std::size_t i) {
    const auto t0 = std::chrono::steady_clock::now();
    try {
      out.results[i] = tasks[i](out.stats.per_task[i].ops);
    } catch (const std::exception& e) {
      out.errors[i] = e.what();
    } catch (...) {
      out.errors[i] = "unknown error";
    }
    const auto t1 = std::chrono::steady_clock::now();
    out.stats.per_task[i].wall_seconds = std::chrono::duration<double>(t1 - t0).count();
  };

  if (workers <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) run_one(i);
  } else {
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        run_one(i);
      }
    };
    const std::size_t nthreads = workers < count ? workers : count;
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (std::size_t t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  out.stats.finalize();
  return out;
}

// --- weak scaling model ---

struct WeakScalingRow {
  std::size_t p = 0;
  std::size_t n = 0;
  double modeled_seconds = 0.0;
  double efficiency = 0.0;  // modeled(base) / modeled(step)
};

enum class ScalingCost {
  dkrr,        // whole-data distributed solve: n^3/(3p) flops per machine
  partitioned  // independent per-partition solves: (n/p)^3/3 per machine
};

// Doubling sweep holding n/p fixed: step i has p = base_p << i, n = base_n << i.
// Modeled time is the leading-order per-machine training compute (gamma * flops);
// see README for why communication terms are excluded here.
std::vector<WeakScalingRow> weak_scaling_report(ScalingCost cost, std::size_t base_p,
                                                std::size_t base_n, std::size_t steps,
                                                const CostModel& model = {});

}  // namespace pkrr
