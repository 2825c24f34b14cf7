#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "pkrr/dataset.hpp"
#include "pkrr/kernel.hpp"
#include "pkrr/matrix.hpp"
#include "pkrr/ops.hpp"

namespace pkrr {

// Raised when a pivot is not strictly positive: either lambda is too small
// for the accumulated rounding or the kernel is indefinite (sigmoid).
class NotPositiveDefinite : public std::runtime_error {
 public:
  NotPositiveDefinite(std::size_t pivot, double value);
  std::size_t pivot;
};

struct CholeskyFactor {
  Matrix L;  // lower triangular, strictly positive diagonal
};

// Plain right-looking dense Cholesky, no blocking or pivoting. Consumes A
// (factors in place). Flops: m(m+1)(2m+1)/6, i.e. m^3/3 + O(m^2).
CholeskyFactor cholesky(Matrix A, OpCount* ops = nullptr);

// Forward + backward substitution against L L^T.
std::vector<double> solve_spd(const CholeskyFactor& F, std::span<const double> b,
                              OpCount* ops = nullptr);

// Per-partition trained model: support samples, coefficients, and (for
// center-based partitions) the cluster center.
struct KrrModel {
  Dataset support;
  std::vector<double> support_sq_norms;
  std::vector<double> alpha;
  KernelSpec kernel;
  double lambda = 0.0;
  std::optional<std::vector<double>> center;
  double residual_ratio = 0.0;  // ||A alpha - y|| / ||y|| of the solved system
  OpCount train_ops;            // gram + assemble + factor + solve charges

  // sum_i alpha_i Phi(x_i, x)
  double predict(SparseRow x, OpCount* ops = nullptr) const;
};

// Solves (K + lambda*m*I) alpha = y over the dataset's samples and labels.
KrrModel train_krr(const Dataset& data, const KernelSpec& spec, double lambda,
                   OpCount* ops = nullptr);

}  // namespace pkrr
