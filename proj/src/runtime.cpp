#include "pkrr/runtime.hpp"

#include <stdexcept>

namespace pkrr {

double estimate_time(const CostModel& model, double flops, double messages,
                     double bytes_per_message) {
  if (flops < 0.0 || messages < 0.0 || bytes_per_message < 0.0)
    throw std::invalid_argument("estimate_time: negative input");
  return flops * model.gamma + messages * (model.alpha + bytes_per_message * model.beta);
}

double estimate_time(const CostModel& model, const OpCount& ops) {
  const double messages = static_cast<double>(ops.messages);
  const double bytes_per_message =
      ops.messages == 0 ? 0.0
                        : static_cast<double>(ops.bytes) / static_cast<double>(ops.messages);
  return estimate_time(model, static_cast<double>(ops.total_flops()), messages,
                       bytes_per_message);
}

double theoretical_speedup(std::size_t n, std::size_t p, SpeedupVariant variant) {
  if (p < 1 || n < p) throw std::invalid_argument("theoretical_speedup: need n >= p >= 1");
  const double pd = static_cast<double>(p);
  switch (variant) {
    case SpeedupVariant::bk2_vs_dkrr:
      return pd * pd;  // (n^3/p) / ((n/p)^3)
    case SpeedupVariant::bk2_2x_vs_dkrr:
      return pd * pd / 8.0;  // (n^3/p) / ((2n/p)^3)
  }
  return 0.0;
}

void RunStats::finalize() {
  max_wall_seconds = 0.0;
  total_wall_seconds = 0.0;
  totals = OpCount{};
  for (const auto& t : per_task) {
    if (t.wall_seconds > max_wall_seconds) max_wall_seconds = t.wall_seconds;
    total_wall_seconds += t.wall_seconds;
    totals += t.ops;
  }
}

std::vector<WeakScalingRow> weak_scaling_report(ScalingCost cost, std::size_t base_p,
                                                std::size_t base_n, std::size_t steps,
                                                const CostModel& model) {
  if (base_p < 1 || base_n < base_p || base_n % base_p != 0)
    throw std::invalid_argument("weak_scaling_report: base_n must be a multiple of base_p");

  // Leading-order per-machine training compute; the per-partition solve keeps
  // (n/p)^3 constant while the whole-data solve grows as p^2 per machine.
  auto modeled = [&](double n, double p) {
    const double flops =
        cost == ScalingCost::dkrr ? n * n * n / (3.0 * p) : (n / p) * (n / p) * (n / p) / 3.0;
    return flops * model.gamma;
  };

  std::vector<WeakScalingRow> rows;
  rows.reserve(steps);
  const double base_time =
      modeled(static_cast<double>(base_n), static_cast<double>(base_p));
  for (std::size_t s = 0; s < steps; ++s) {
    WeakScalingRow row;
    row.p = base_p << s;
    row.n = base_n << s;
    row.modeled_seconds = modeled(static_cast<double>(row.n), static_cast<double>(row.p));
    row.efficiency = base_time / row.modeled_seconds;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace pkrr
