#pragma once

// Independent reference implementations used only as test oracles. They share
// no code with the library paths they check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "pkrr/dataset.hpp"
#include "pkrr/matrix.hpp"

namespace oracles {

// Dense solve via Gaussian elimination with partial pivoting.
inline std::vector<double> gaussian_elimination(pkrr::Matrix A, std::vector<double> b) {
  const std::size_t n = A.rows;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pivot = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::fabs(A(i, k)) > std::fabs(A(pivot, k))) pivot = i;
    if (A(pivot, k) == 0.0) throw std::runtime_error("singular matrix");
    if (pivot != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(A(k, j), A(pivot, j));
      std::swap(b[k], b[pivot]);
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const double factor = A(i, k) / A(k, k);
      for (std::size_t j = k; j < n; ++j) A(i, j) -= factor * A(k, j);
      b[i] -= factor * b[k];
    }
  }
  std::vector<double> x(n);
  for (std::size_t ii = n; ii-- > 0;) {
    double sum = b[ii];
    for (std::size_t j = ii + 1; j < n; ++j) sum -= A(ii, j) * x[j];
    x[ii] = sum / A(ii, ii);
  }
  return x;
}

// Smallest eigenvalue of a symmetric 2x2 or 3x3 matrix via the
// characteristic polynomial (closed forms).
inline double min_eigenvalue_sym(const pkrr::Matrix& A) {
  if (A.rows == 2) {
    const double a = A(0, 0), b = A(0, 1), c = A(1, 1);
    const double mean = 0.5 * (a + c);
    const double disc = std::sqrt(0.25 * (a - c) * (a - c) + b * b);
    return mean - disc;
  }
  if (A.rows == 3) {
    // eigenvalues of A = q I + p B solved trigonometrically
    const double a = A(0, 0), b = A(1, 1), c = A(2, 2);
    const double d = A(0, 1), e = A(1, 2), f = A(0, 2);
    const double q = (a + b + c) / 3.0;
    const double p2 = (a - q) * (a - q) + (b - q) * (b - q) + (c - q) * (c - q) +
                      2.0 * (d * d + e * e + f * f);
    const double p = std::sqrt(p2 / 6.0);
    if (p == 0.0) return q;
    // det(A - q I) / p^3
    const double m00 = (a - q) / p, m11 = (b - q) / p, m22 = (c - q) / p;
    const double m01 = d / p, m12 = e / p, m02 = f / p;
    double r = 0.5 * (m00 * (m11 * m22 - m12 * m12) - m01 * (m01 * m22 - m12 * m02) +
                      m02 * (m01 * m12 - m11 * m02));
    if (r < -1.0) r = -1.0;
    if (r > 1.0) r = 1.0;
    const double phi = std::acos(r) / 3.0;
    // smallest root
    return q + 2.0 * p * std::cos(phi + 2.0 * std::numbers::pi / 3.0);
  }
  throw std::runtime_error("min_eigenvalue_sym: only 2x2 and 3x3");
}

// Optimal 2-clustering cost by enumerating all assignments (tiny n only).
inline double brute_force_2means_wcss(const std::vector<std::vector<double>>& points) {
  const std::size_t n = points.size();
  const std::size_t d = points[0].size();
  if (n > 20) throw std::runtime_error("instance too large for brute force");
  double best = std::numeric_limits<double>::infinity();
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    std::vector<double> mean0(d, 0.0), mean1(d, 0.0);
    std::size_t n0 = 0, n1 = 0;
    for (std::size_t i = 0; i < n; ++i) {
      auto& mean = (mask >> i) & 1u ? mean1 : mean0;
      ((mask >> i) & 1u ? n1 : n0) += 1;
      for (std::size_t j = 0; j < d; ++j) mean[j] += points[i][j];
    }
    if (n0 == 0 || n1 == 0) continue;
    for (std::size_t j = 0; j < d; ++j) {
      mean0[j] /= static_cast<double>(n0);
      mean1[j] /= static_cast<double>(n1);
    }
    double wcss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto& mean = (mask >> i) & 1u ? mean1 : mean0;
      for (std::size_t j = 0; j < d; ++j) {
        const double diff = points[i][j] - mean[j];
        wcss += diff * diff;
      }
    }
    best = std::min(best, wcss);
  }
  return best;
}

// Replays the balanced assignment scan: nearest center with remaining
// capacity, where only (n mod k) clusters may exceed floor(n/k).
inline std::vector<int> replay_balanced_scan(const pkrr::Dataset& X,
                                             const std::vector<std::vector<double>>& centers) {
  const std::size_t n = X.n;
  const int k = static_cast<int>(centers.size());
  const std::size_t base = n / static_cast<std::size_t>(k);
  const std::size_t extra = n % static_cast<std::size_t>(k);

  std::vector<int> membership(n, -1);
  std::vector<std::size_t> sizes(k, 0);
  std::size_t grown = 0;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> x(X.d, 0.0);
    const pkrr::SparseRow r = X.row(i);
    for (std::size_t t = 0; t < r.nnz(); ++t) x[r.idx[t]] = r.val[t];

    double best = std::numeric_limits<double>::infinity();
    int best_j = -1;
    for (int j = 0; j < k; ++j) {
      if (!(sizes[j] < base || (sizes[j] == base && grown < extra))) continue;
      double dist = 0.0;
      for (std::size_t t = 0; t < X.d; ++t) {
        const double diff = x[t] - centers[j][t];
        dist += diff * diff;
      }
      if (dist < best) {
        best = dist;
        best_j = j;
      }
    }
    if (sizes[best_j] == base) ++grown;
    ++sizes[best_j];
    membership[i] = best_j;
  }
  return membership;
}

// Scratch directory helper for file-based tests.
inline std::string fresh_dir(const std::string& tag) {
  static int counter = 0;
  const auto dir = std::filesystem::temp_directory_path() /
                   ("pkrr_test_" + tag + "_" + std::to_string(++counter));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir.string();
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace oracles
