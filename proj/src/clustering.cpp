#include "pkrr/clustering.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "pkrr/rng.hpp"

namespace pkrr {

namespace {

std::vector<double> dense_copy(const Dataset& X, std::size_t i) {
  std::vector<double> out(X.d, 0.0);
  const SparseRow r = X.row(i);
  for (std::size_t k = 0; k < r.nnz(); ++k) out[r.idx[k]] = r.val[k];
  return out;
}

std::vector<double> row_sq_norms(const Dataset& X) {
  std::vector<double> norms(X.n);
  for (std::size_t i = 0; i < X.n; ++i) norms[i] = squared_norm(X.row(i));
  return norms;
}

double center_sq_norm(const std::vector<double>& c) {
  double s = 0.0;
  for (double v : c) s += v * v;
  return s;
}

void recompute_means(const Dataset& X, Clustering& c) {
  const int k = c.k;
  for (auto& ct : c.centers) std::fill(ct.begin(), ct.end(), 0.0);
  c.sizes.assign(k, 0);
  for (std::size_t i = 0; i < X.n; ++i) {
    const int j = c.membership[i];
    ++c.sizes[j];
    const SparseRow r = X.row(i);
    for (std::size_t t = 0; t < r.nnz(); ++t) c.centers[j][r.idx[t]] += r.val[t];
  }
  for (int j = 0; j < k; ++j) {
    if (c.sizes[j] == 0) continue;
    const double inv = 1.0 / static_cast<double>(c.sizes[j]);
    for (double& v : c.centers[j]) v *= inv;
  }
}

}  // namespace

Clustering kmeans(const Dataset& X, int k, std::uint64_t seed, const KMeansParams& params,
                  KMeansDiag* diag) {
  if (k < 1 || static_cast<std::size_t>(k) > X.n)
    throw std::invalid_argument("kmeans: need 1 <= k <= n");

  Clustering c;
  c.k = k;
  c.d = X.d;
  c.membership.assign(X.n, -1);
  c.sizes.assign(k, 0);

  // init: k distinct samples chosen uniformly
  Rng rng(seed);
  std::vector<std::size_t> perm = random_permutation(X.n, rng);
  c.centers.reserve(k);
  for (int j = 0; j < k; ++j) c.centers.push_back(dense_copy(X, perm[j]));

  const std::vector<double> x_norms = row_sq_norms(X);
  std::vector<double> c_norms(k);
  std::vector<double> best_dist(X.n);

  int iter = 0;
  for (; iter < params.max_iters; ++iter) {
    for (int j = 0; j < k; ++j) c_norms[j] = center_sq_norm(c.centers[j]);

    // assignment
    std::size_t changed = 0;
    for (std::size_t i = 0; i < X.n; ++i) {
      const SparseRow r = X.row(i);
      double min_d = std::numeric_limits<double>::infinity();
      int min_j = 0;
      for (int j = 0; j < k; ++j) {
        const double dist = squared_distance_to_center(r, x_norms[i], c.centers[j], c_norms[j]);
        if (dist < min_d) {
          min_d = dist;
          min_j = j;
        }
      }
      if (c.membership[i] != min_j) {
        c.membership[i] = min_j;
        ++changed;
      }
      best_dist[i] = min_d;
    }

    // an emptied cluster is reseeded to the sample farthest from its center
    std::vector<std::size_t> sizes(k, 0);
    for (std::size_t i = 0; i < X.n; ++i) ++sizes[c.membership[i]];
    for (int j = 0; j < k; ++j) {
      if (sizes[j] != 0) continue;
      double far_d = -1.0;
      std::size_t far_i = 0;
      for (std::size_t i = 0; i < X.n; ++i) {
        if (sizes[c.membership[i]] <= 1) continue;  // do not empty another cluster
        if (best_dist[i] > far_d) {
          far_d = best_dist[i];
          far_i = i;
        }
      }
      --sizes[c.membership[far_i]];
      c.membership[far_i] = j;
      sizes[j] = 1;
      best_dist[far_i] = 0.0;
      ++changed;
    }

    recompute_means(X, c);

    if (diag) {
      double wcss = 0.0;
      for (int j = 0; j < k; ++j) c_norms[j] = center_sq_norm(c.centers[j]);
      for (std::size_t i = 0; i < X.n; ++i)
        wcss += squared_distance_to_center(X.row(i), x_norms[i],
                                           c.centers[c.membership[i]],
                                           c_norms[c.membership[i]]);
      diag->wcss.push_back(wcss);
    }

    if (static_cast<double>(changed) / static_cast<double>(X.n) <= params.threshold) {
      ++iter;
      break;
    }
  }
  if (diag) diag->iterations = iter;
  return c;
}

Clustering kbalance(const Dataset& X, int k, std::uint64_t seed, const KMeansParams& params) {
  if (k < 1 || static_cast<std::size_t>(k) > X.n)
    throw std::invalid_argument("kbalance: need 1 <= k <= n");

  Clustering c = kmeans(X, k, seed, params);

  const std::size_t base = X.n / static_cast<std::size_t>(k);
  const std::size_t extra = X.n % static_cast<std::size_t>(k);  // clusters allowed at base+1

  c.membership.assign(X.n, -1);
  c.sizes.assign(k, 0);
  std::size_t grown = 0;  // clusters currently above base

  const std::vector<double> x_norms = row_sq_norms(X);
  std::vector<double> c_norms(k);
  for (int j = 0; j < k; ++j) c_norms[j] = center_sq_norm(c.centers[j]);

  // Sequential scan in row order; each sample takes its nearest center with
  // remaining capacity (strict < keeps the lowest index on ties).
  for (std::size_t i = 0; i < X.n; ++i) {
    const SparseRow r = X.row(i);
    double min_d = std::numeric_limits<double>::infinity();
    int min_j = -1;
    for (int j = 0; j < k; ++j) {
      const bool open = c.sizes[j] < base || (c.sizes[j] == base && grown < extra);
      if (!open) continue;
      const double dist = squared_distance_to_center(r, x_norms[i], c.centers[j], c_norms[j]);
      if (dist < min_d) {
        min_d = dist;
        min_j = j;
      }
    }
    if (min_j < 0) throw std::logic_error("kbalance: no open cluster");
    if (c.sizes[min_j] == base) ++grown;
    ++c.sizes[min_j];
    c.membership[i] = min_j;
  }

  if (params.recompute_centers) recompute_means(X, c);
  return c;
}

int nearest_center(const std::vector<std::vector<double>>& centers, SparseRow x) {
  if (centers.empty()) throw std::invalid_argument("nearest_center: no centers");
  const double x_sq = squared_norm(x);
  double min_d = std::numeric_limits<double>::infinity();
  int min_j = 0;
  for (std::size_t j = 0; j < centers.size(); ++j) {
    const double dist = squared_distance_to_center(x, x_sq, centers[j], center_sq_norm(centers[j]));
    if (dist < min_d) {
      min_d = dist;
      min_j = static_cast<int>(j);
    }
  }
  return min_j;
}

int nearest_center(const Clustering& c, SparseRow x) { return nearest_center(c.centers, x); }

void save_clustering(const Clustering& c, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << c.k << ' ' << c.d << ' ' << c.membership.size() << '\n';
  char buf[64];
  for (const auto& center : c.centers) {
    for (std::size_t j = 0; j < center.size(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", center[j]);
      out << (j ? " " : "") << buf;
    }
    out << '\n';
  }
  for (int m : c.membership) out << m << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

Clustering load_clustering(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  Clustering c;
  std::size_t n = 0;
  if (!(in >> c.k >> c.d >> n)) throw std::runtime_error(path + ": bad clustering header");
  c.centers.assign(c.k, std::vector<double>(c.d, 0.0));
  for (auto& center : c.centers)
    for (double& v : center)
      if (!(in >> v)) throw std::runtime_error(path + ": truncated center row");
  c.membership.resize(n);
  c.sizes.assign(c.k, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(in >> c.membership[i])) throw std::runtime_error(path + ": truncated membership");
    if (c.membership[i] < 0 || c.membership[i] >= c.k)
      throw std::runtime_error(path + ": membership out of range");
    ++c.sizes[c.membership[i]];
  }
  return c;
}

}  // namespace pkrr
