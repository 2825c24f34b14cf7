#include "pkrr/kernel.hpp"

#include <cmath>
#include <stdexcept>

namespace pkrr {

const char* kernel_name(KernelKind k) {
  switch (k) {
    case KernelKind::linear: return "linear";
    case KernelKind::polynomial: return "polynomial";
    case KernelKind::gaussian: return "gaussian";
    case KernelKind::sigmoid: return "sigmoid";
  }
  return "?";
}

KernelKind parse_kernel(const std::string& name) {
  if (name == "linear") return KernelKind::linear;
  if (name == "polynomial") return KernelKind::polynomial;
  if (name == "gaussian") return KernelKind::gaussian;
  if (name == "sigmoid") return KernelKind::sigmoid;
  throw std::invalid_argument("unknown kernel: " + name);
}

namespace {

void validate(const KernelSpec& spec) {
  if (spec.kind == KernelKind::gaussian && !(spec.sigma > 0.0))
    throw std::invalid_argument("gaussian kernel needs sigma > 0");
  if (spec.kind == KernelKind::polynomial && spec.degree < 1)
    throw std::invalid_argument("polynomial kernel needs degree >= 1");
}

double ipow(double base, int exp) {
  double out = 1.0;
  for (int i = 0; i < exp; ++i) out *= base;
  return out;
}

}  // namespace

double kernel_eval_cached(const KernelSpec& spec, SparseRow a, double a_sq_norm,
                          SparseRow b, double b_sq_norm) {
  switch (spec.kind) {
    case KernelKind::linear:
      return sparse_dot(a, b);
    case KernelKind::polynomial:
      return ipow(spec.a * sparse_dot(a, b) + spec.r, spec.degree);
    case KernelKind::sigmoid:
      return std::tanh(spec.a * sparse_dot(a, b) + spec.r);
    case KernelKind::gaussian: {
      double dist2 = a_sq_norm + b_sq_norm - 2.0 * sparse_dot(a, b);
      if (dist2 < 0.0) dist2 = 0.0;
      return std::exp(-dist2 / (2.0 * spec.sigma * spec.sigma));
    }
  }
  return 0.0;
}

double kernel_eval(const KernelSpec& spec, SparseRow a, SparseRow b) {
  validate(spec);
  if (spec.kind == KernelKind::gaussian)
    return kernel_eval_cached(spec, a, squared_norm(a), b, squared_norm(b));
  return kernel_eval_cached(spec, a, 0.0, b, 0.0);
}

std::uint64_t kernel_eval_flops(const KernelSpec& spec, std::size_t nnz_a, std::size_t nnz_b) {
  // Accounting constants: the merged dot product is charged 2*min(nnz) and
  // each transcendental call 1.
  const std::uint64_t dot = 2 * static_cast<std::uint64_t>(nnz_a < nnz_b ? nnz_a : nnz_b);
  switch (spec.kind) {
    case KernelKind::linear: return dot;
    case KernelKind::polynomial: return dot + 2 + static_cast<std::uint64_t>(spec.degree);
    case KernelKind::sigmoid: return dot + 3;
    case KernelKind::gaussian: return dot + 6;
  }
  return dot;
}

Matrix gram(const KernelSpec& spec, const Dataset& A, const Dataset& B, OpCount* ops) {
  validate(spec);
  if (A.d != B.d) throw std::invalid_argument("gram: dimension mismatch");

  const bool gaussian = spec.kind == KernelKind::gaussian;
  const bool same = &A == &B;
  std::uint64_t flops = 0;

  std::vector<double> a_norms, b_norms;
  if (gaussian) {
    a_norms.resize(A.n);
    for (std::size_t i = 0; i < A.n; ++i) {
      a_norms[i] = squared_norm(A.row(i));
      flops += 2 * A.row(i).nnz();
    }
    if (!same) {
      b_norms.resize(B.n);
      for (std::size_t j = 0; j < B.n; ++j) {
        b_norms[j] = squared_norm(B.row(j));
        flops += 2 * B.row(j).nnz();
      }
    }
  }
  const std::vector<double>& bn = same ? a_norms : b_norms;

  Matrix K(A.n, B.n);
  if (same) {
    // one evaluation per unordered pair, mirrored: bitwise symmetric
    for (std::size_t i = 0; i < A.n; ++i) {
      const SparseRow ri = A.row(i);
      const double ni = gaussian ? a_norms[i] : 0.0;
      for (std::size_t j = i; j < A.n; ++j) {
        const double v =
            kernel_eval_cached(spec, ri, ni, A.row(j), gaussian ? a_norms[j] : 0.0);
        K(i, j) = v;
        K(j, i) = v;
        flops += kernel_eval_flops(spec, ri.nnz(), A.row(j).nnz());
      }
    }
  } else {
    for (std::size_t i = 0; i < A.n; ++i) {
      const SparseRow ri = A.row(i);
      const double ni = gaussian ? a_norms[i] : 0.0;
      for (std::size_t j = 0; j < B.n; ++j) {
        K(i, j) = kernel_eval_cached(spec, ri, ni, B.row(j), gaussian ? bn[j] : 0.0);
        flops += kernel_eval_flops(spec, ri.nnz(), B.row(j).nnz());
      }
    }
  }
  if (ops) ops->gram_flops += flops;
  return K;
}

Matrix assemble_system(const Matrix& K, double lambda, std::size_t m) {
  if (K.rows != K.cols) throw std::invalid_argument("assemble_system: matrix not square");
  if (!(lambda > 0.0)) throw std::invalid_argument("assemble_system: lambda must be > 0");
  Matrix A = K;
  const double shift = lambda * static_cast<double>(m);
  for (std::size_t i = 0; i < A.rows; ++i) A(i, i) += shift;
  return A;
}

}  // namespace pkrr
