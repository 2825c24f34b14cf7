#pragma once

#include <cstddef>
#include <vector>

namespace pkrr {

// Dense row-major matrix of doubles.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> a;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0.0) {}

  double& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

  double* row_ptr(std::size_t i) { return a.data() + i * cols; }
  const double* row_ptr(std::size_t i) const { return a.data() + i * cols; }

  static Matrix identity(std::size_t m) {
    Matrix I(m, m);
    for (std::size_t i = 0; i < m; ++i) I(i, i) = 1.0;
    return I;
  }
};

}  // namespace pkrr
