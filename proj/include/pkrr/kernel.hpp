#pragma once

#include <vector>

#include "pkrr/dataset.hpp"
#include "pkrr/matrix.hpp"
#include "pkrr/ops.hpp"

namespace pkrr {

enum class KernelKind { linear, polynomial, gaussian, sigmoid };

const char* kernel_name(KernelKind k);
KernelKind parse_kernel(const std::string& name);  // throws std::invalid_argument

struct KernelSpec {
  KernelKind kind = KernelKind::gaussian;
  double a = 1.0;      // polynomial / sigmoid scale
  double r = 0.0;      // polynomial / sigmoid offset
  int degree = 2;      // polynomial
  double sigma = 1.0;  // gaussian width, > 0
};

// Phi(x_i, x_j):
//   linear      x.y
//   polynomial  (a x.y + r)^degree
//   gaussian    exp(-||x-y||^2 / (2 sigma^2))
//   sigmoid     tanh(a x.y + r)
// Gaussian distances use ||x||^2 + ||y||^2 - 2 x.y with the negative rounding
// artifact clamped at 0, identically in the cached and uncached paths.
double kernel_eval(const KernelSpec& spec, SparseRow a, SparseRow b);
double kernel_eval_cached(const KernelSpec& spec, SparseRow a, double a_sq_norm,
                          SparseRow b, double b_sq_norm);

// Analytic flop charge of one evaluation (documented accounting constants).
std::uint64_t kernel_eval_flops(const KernelSpec& spec, std::size_t nnz_a, std::size_t nnz_b);

// |A| x |B| kernel matrix. When &A == &B each unordered pair is computed once
// and mirrored, so the result is bitwise symmetric.
Matrix gram(const KernelSpec& spec, const Dataset& A, const Dataset& B, OpCount* ops = nullptr);

// K + lambda*m*I. `m` is the sample-count multiplier of the regularizer
// (the partition size for partitioned training).
Matrix assemble_system(const Matrix& K, double lambda, std::size_t m);

}  // namespace pkrr
