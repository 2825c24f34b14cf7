#include "pkrr/solver.hpp"

#include <cmath>
#include <string>

namespace pkrr {

NotPositiveDefinite::NotPositiveDefinite(std::size_t pivot_, double value)
    : std::runtime_error("matrix not positive definite: pivot " + std::to_string(pivot_) +
                         " = " + std::to_string(value)),
      pivot(pivot_) {}

CholeskyFactor cholesky(Matrix A, OpCount* ops) {
  if (A.rows != A.cols) throw std::invalid_argument("cholesky: matrix not square");
  const std::size_t m = A.rows;
  std::vector<double> col_j(m);

  for (std::size_t j = 0; j < m; ++j) {
    const double pivot = A(j, j);
    if (!(pivot > 0.0)) throw NotPositiveDefinite(j, pivot);
    const double diag = std::sqrt(pivot);
    A(j, j) = diag;
    for (std::size_t i = j + 1; i < m; ++i) {
      A(i, j) /= diag;
      col_j[i] = A(i, j);
    }
    // trailing update: A(i,k) -= L(i,j) * L(k,j), contiguous in k
    for (std::size_t i = j + 1; i < m; ++i) {
      double* row_i = A.row_ptr(i);
      const double lij = col_j[i];
      for (std::size_t k = j + 1; k <= i; ++k) row_i[k] -= lij * col_j[k];
    }
    // zero the strict upper triangle of this column's row
    for (std::size_t k = j + 1; k < m; ++k) A(j, k) = 0.0;
  }

  // Exact accounting for the loops above: sum over j of
  // 1 sqrt + (m-1-j) divs + 2(i-j) per updated row = sum t^2 = m(m+1)(2m+1)/6.
  if (ops) {
    const std::uint64_t mu = m;
    ops->solve_flops += mu * (mu + 1) * (2 * mu + 1) / 6;
  }
  return CholeskyFactor{std::move(A)};
}

std::vector<double> solve_spd(const CholeskyFactor& F, std::span<const double> b,
                              OpCount* ops) {
  const Matrix& L = F.L;
  const std::size_t m = L.rows;
  if (b.size() != m) throw std::invalid_argument("solve_spd: size mismatch");

  std::vector<double> x(m);
  // forward: L z = b
  for (std::size_t i = 0; i < m; ++i) {
    double sum = b[i];
    const double* row = L.row_ptr(i);
    for (std::size_t k = 0; k < i; ++k) sum -= row[k] * x[k];
    x[i] = sum / row[i];
  }
  // backward: L^T x = z
  for (std::size_t ii = m; ii-- > 0;) {
    double sum = x[ii];
    for (std::size_t k = ii + 1; k < m; ++k) sum -= L(k, ii) * x[k];
    x[ii] = sum / L(ii, ii);
  }

  if (ops) {
    const std::uint64_t mu = m;
    ops->solve_flops += 2 * mu * mu;  // m^2 per triangular sweep
  }
  return x;
}

double KrrModel::predict(SparseRow x, OpCount* ops) const {
  const bool gaussian = kernel.kind == KernelKind::gaussian;
  const double x_sq = gaussian ? squared_norm(x) : 0.0;
  double sum = 0.0;
  std::uint64_t flops = gaussian ? 2 * x.nnz() : 0;
  for (std::size_t i = 0; i < support.n; ++i) {
    const SparseRow s = support.row(i);
    sum += alpha[i] *
           kernel_eval_cached(kernel, s, gaussian ? support_sq_norms[i] : 0.0, x, x_sq);
    flops += kernel_eval_flops(kernel, s.nnz(), x.nnz()) + 2;
  }
  if (ops) ops->predict_flops += flops;
  return sum;
}

KrrModel train_krr(const Dataset& data, const KernelSpec& spec, double lambda,
                   OpCount* ops) {
  if (data.n == 0) throw std::invalid_argument("train_krr: empty dataset");
  if (!(lambda > 0.0)) throw std::invalid_argument("train_krr: lambda must be > 0");

  OpCount local;
  const Matrix K = gram(spec, data, data, &local);
  Matrix A = assemble_system(K, lambda, data.n);
  local.solve_flops += data.n;  // diagonal shift
  CholeskyFactor F = cholesky(std::move(A), &local);
  std::vector<double> alpha = solve_spd(F, data.y, &local);

  // residual of the shifted system, from the retained Gram matrix
  // (verification only, not charged to the counters)
  const double shift = lambda * static_cast<double>(data.n);
  double res_sq = 0.0, y_sq = 0.0;
  for (std::size_t i = 0; i < data.n; ++i) {
    double acc = shift * alpha[i] - data.y[i];
    const double* row = K.row_ptr(i);
    for (std::size_t j = 0; j < data.n; ++j) acc += row[j] * alpha[j];
    res_sq += acc * acc;
    y_sq += data.y[i] * data.y[i];
  }

  KrrModel model;
  model.support = data;
  model.support_sq_norms.resize(data.n);
  for (std::size_t i = 0; i < data.n; ++i)
    model.support_sq_norms[i] = squared_norm(data.row(i));
  model.alpha = std::move(alpha);
  model.kernel = spec;
  model.lambda = lambda;
  model.residual_ratio = y_sq > 0.0 ? std::sqrt(res_sq) / std::sqrt(y_sq) : std::sqrt(res_sq);
  model.train_ops = local;
  if (ops) *ops += local;
  return model;
}

}  // namespace pkrr
