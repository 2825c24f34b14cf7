#pragma once

#include <cstdint>

namespace pkrr {

// Arithmetic/communication counters accumulated by the numerical kernels.
// Flop charges are analytic (derived from loop bounds), so counts are exact,
// deterministic, and independent of scheduling.
struct OpCount {
  std::uint64_t gram_flops = 0;     // kernel matrix assembly
  std::uint64_t solve_flops = 0;    // assemble + factor + triangular solves
  std::uint64_t predict_flops = 0;  // model evaluation on queries
  std::uint64_t messages = 0;       // messages sent by this machine
  std::uint64_t bytes = 0;          // total bytes across those messages

  std::uint64_t total_flops() const { return gram_flops + solve_flops + predict_flops; }

  OpCount& operator+=(const OpCount& o) {
    gram_flops += o.gram_flops;
    solve_flops += o.solve_flops;
    predict_flops += o.predict_flops;
    messages += o.messages;
    bytes += o.bytes;
    return *this;
  }
};

}  // namespace pkrr
