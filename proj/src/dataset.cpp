#include "pkrr/dataset.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "pkrr/rng.hpp"

namespace pkrr {

void Dataset::add_row(std::span<const int> indices, std::span<const double> values,
                      double label) {
  for (std::size_t k = 0; k < indices.size(); ++k) {
    if (k > 0 && indices[k] <= indices[k - 1])
      throw std::invalid_argument("row indices must be strictly increasing");
    if (indices[k] < 0) throw std::invalid_argument("negative feature index");
  }
  col.insert(col.end(), indices.begin(), indices.end());
  val.insert(val.end(), values.begin(), values.end());
  row_ptr.push_back(col.size());
  y.push_back(label);
  ++n;
  if (!indices.empty() && static_cast<std::size_t>(indices.back()) + 1 > d)
    d = static_cast<std::size_t>(indices.back()) + 1;
}

double sparse_dot(SparseRow a, SparseRow b) {
  double sum = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.idx.size() && j < b.idx.size()) {
    if (a.idx[i] == b.idx[j]) {
      sum += a.val[i] * b.val[j];
      ++i;
      ++j;
    } else if (a.idx[i] < b.idx[j]) {
      ++i;
    } else {
      ++j;
    }
  }
  return sum;
}

double squared_norm(SparseRow a) {
  double sum = 0.0;
  for (double v : a.val) sum += v * v;
  return sum;
}

double squared_distance_to_center(SparseRow x, double x_sq_norm,
                                  std::span<const double> center, double center_sq_norm) {
  double dot = 0.0;
  for (std::size_t k = 0; k < x.idx.size(); ++k) dot += x.val[k] * center[x.idx[k]];
  double dist2 = x_sq_norm + center_sq_norm - 2.0 * dot;
  return dist2 < 0.0 ? 0.0 : dist2;
}

// ---------------------------------------------------------------------------
// sparse text IO
// ---------------------------------------------------------------------------

namespace {

[[noreturn]] void parse_fail(const std::string& path, std::size_t line_no,
                             const std::string& what) {
  throw std::runtime_error(path + ": parse error at line " + std::to_string(line_no) +
                           ": " + what);
}

bool blank(const std::string& s) {
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

Dataset load_libsvm(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);

  Dataset ds;
  std::string line;
  std::size_t line_no = 0;
  std::vector<int> idx;
  std::vector<double> val;

  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;

    const char* p = line.c_str();
    char* end = nullptr;
    const double label = std::strtod(p, &end);
    if (end == p) parse_fail(path, line_no, "expected numeric label");
    p = end;

    idx.clear();
    val.clear();
    for (;;) {
      while (*p == ' ' || *p == '\t' || *p == '\r') ++p;
      if (*p == '\0') break;

      const long index = std::strtol(p, &end, 10);
      if (end == p || *end != ':') parse_fail(path, line_no, "expected <index>:<value>");
      if (index < 1) parse_fail(path, line_no, "feature indices are 1-based");
      p = end + 1;

      const double value = std::strtod(p, &end);
      if (end == p) parse_fail(path, line_no, "expected numeric feature value");
      p = end;

      const int zero_based = static_cast<int>(index - 1);
      if (!idx.empty() && zero_based <= idx.back())
        parse_fail(path, line_no, "feature indices must be strictly increasing");
      idx.push_back(zero_based);
      val.push_back(value);
    }
    ds.add_row(idx, val, label);
  }

  if (ds.n == 0) throw std::runtime_error(path + ": empty dataset");
  return ds;
}

void save_libsvm(const Dataset& ds, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  char buf[64];
  for (std::size_t i = 0; i < ds.n; ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g", ds.y[i]);
    out << buf;
    const SparseRow r = ds.row(i);
    for (std::size_t k = 0; k < r.nnz(); ++k) {
      std::snprintf(buf, sizeof(buf), "%.17g", r.val[k]);
      out << ' ' << (r.idx[k] + 1) << ':' << buf;
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

// ---------------------------------------------------------------------------
// splits, standardization, synthesis
// ---------------------------------------------------------------------------

Dataset subset(const Dataset& ds, std::span<const std::size_t> rows) {
  Dataset out;
  out.d = ds.d;
  for (std::size_t i : rows) {
    const SparseRow r = ds.row(i);
    out.add_row(r.idx, r.val, ds.y[i]);
  }
  out.d = ds.d;  // keep the parent dimension even if trailing features are absent
  return out;
}

std::pair<Dataset, Dataset> shuffle_split(const Dataset& ds, const SplitSpec& spec) {
  if (!(spec.test_fraction > 0.0 && spec.test_fraction < 1.0))
    throw std::invalid_argument("test_fraction must be in (0,1)");
  const auto n_test = static_cast<std::size_t>(
      std::llround(static_cast<double>(ds.n) * spec.test_fraction));
  if (n_test < 1 || n_test >= ds.n)
    throw std::invalid_argument("test_fraction leaves an empty split");

  Rng rng(spec.seed);
  const std::vector<std::size_t> perm = random_permutation(ds.n, rng);
  const std::span<const std::size_t> test_rows(perm.data(), n_test);
  const std::span<const std::size_t> train_rows(perm.data() + n_test, ds.n - n_test);
  return {subset(ds, train_rows), subset(ds, test_rows)};
}

Dataset apply_feature_stats(const FeatureStats& stats, const Dataset& ds) {
  if (ds.d > stats.mean.size())
    throw std::invalid_argument("apply_feature_stats: dataset wider than the statistics");
  Dataset out;
  out.d = ds.d;
  std::vector<int> idx(ds.d);
  std::vector<double> dense(ds.d);
  for (std::size_t j = 0; j < ds.d; ++j) idx[j] = static_cast<int>(j);

  for (std::size_t i = 0; i < ds.n; ++i) {
    std::fill(dense.begin(), dense.end(), 0.0);
    const SparseRow r = ds.row(i);
    for (std::size_t k = 0; k < r.nnz(); ++k) dense[r.idx[k]] = r.val[k];
    for (std::size_t j = 0; j < ds.d; ++j)
      dense[j] = stats.stddev[j] == 0.0 ? 0.0 : (dense[j] - stats.mean[j]) / stats.stddev[j];
    out.add_row(idx, dense, ds.y[i]);
  }
  out.d = ds.d;
  return out;
}

StandardizeResult standardize(const Dataset& train, const Dataset& test) {
  if (train.n == 0) throw std::invalid_argument("standardize: empty training set");
  if (test.n > 0 && test.d > train.d)
    throw std::invalid_argument("standardize: test dimension exceeds train dimension");

  FeatureStats stats;
  stats.mean.assign(train.d, 0.0);
  stats.stddev.assign(train.d, 0.0);

  // Sparse rows contribute implicit zeros, so sums run over stored entries
  // while the divisor stays n.
  std::vector<double> sum(train.d, 0.0), sum_sq(train.d, 0.0);
  for (std::size_t i = 0; i < train.n; ++i) {
    const SparseRow r = train.row(i);
    for (std::size_t k = 0; k < r.nnz(); ++k) {
      sum[r.idx[k]] += r.val[k];
      sum_sq[r.idx[k]] += r.val[k] * r.val[k];
    }
  }
  const double inv_n = 1.0 / static_cast<double>(train.n);
  for (std::size_t j = 0; j < train.d; ++j) {
    stats.mean[j] = sum[j] * inv_n;
    double var = sum_sq[j] * inv_n - stats.mean[j] * stats.mean[j];
    if (var < 0.0) var = 0.0;  // rounding guard
    stats.stddev[j] = std::sqrt(var);
  }

  StandardizeResult out;
  out.train = apply_feature_stats(stats, train);
  out.test = test.n > 0 ? apply_feature_stats(stats, test) : Dataset{};
  if (test.n > 0 && test.d < train.d) out.test.d = train.d;
  out.stats = std::move(stats);
  return out;
}

Dataset synth_clustered(std::size_t n, std::size_t d, std::size_t c, double noise,
                        std::uint64_t seed) {
  if (c < 1 || n < c || d < 1) throw std::invalid_argument("synth_clustered: need n >= c >= 1, d >= 1");
  if (noise < 0.0) throw std::invalid_argument("synth_clustered: negative noise");

  // Axis-aligned centers at multiples of 10 spread units: cluster j sits at
  // 10*(1 + j/d) along axis j mod d, so pairwise distances stay >= 10 and
  // every dimension carries cluster signal (separation survives per-feature
  // standardization).
  std::vector<std::vector<double>> centers(c, std::vector<double>(d, 0.0));
  if (c > 1) {
    for (std::size_t j = 0; j < c; ++j)
      centers[j][j % d] = 10.0 * static_cast<double>(1 + j / d);
  }

  Rng rng(seed);
  Dataset ds;
  ds.d = d;
  std::vector<int> idx(d);
  std::vector<double> x(d);
  for (std::size_t j = 0; j < d; ++j) idx[j] = static_cast<int>(j);

  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t cluster = i % c;
    double dist2 = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      const double offset = rng.normal();
      x[j] = centers[cluster][j] + offset;
      dist2 += offset * offset;
    }
    double label = std::sin(std::sqrt(dist2)) + 3.0 * static_cast<double>(cluster);
    if (noise > 0.0) label += noise * rng.normal();
    ds.add_row(idx, x, label);
  }
  ds.d = d;
  return ds;
}

}  // namespace pkrr
