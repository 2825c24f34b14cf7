#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace pkrr {

// One sample of a sparse dataset: parallel index/value views, indices sorted
// ascending with no duplicates.
struct SparseRow {
  std::span<const int> idx;
  std::span<const double> val;

  std::size_t nnz() const { return idx.size(); }
};

// Sparse row-major sample matrix (CSR layout) plus the regressand vector.
struct Dataset {
  std::size_t n = 0;  // samples
  std::size_t d = 0;  // feature dimension
  std::vector<std::size_t> row_ptr{0};
  std::vector<int> col;
  std::vector<double> val;
  std::vector<double> y;

  SparseRow row(std::size_t i) const {
    const std::size_t b = row_ptr[i], e = row_ptr[i + 1];
    return {std::span<const int>(col.data() + b, e - b),
            std::span<const double>(val.data() + b, e - b)};
  }

  // Appends one sample; entries must be sorted by index, no duplicates.
  void add_row(std::span<const int> indices, std::span<const double> values, double label);
};

double sparse_dot(SparseRow a, SparseRow b);
double squared_norm(SparseRow a);
// ||x - c||^2 using a dense center with its cached squared norm.
double squared_distance_to_center(SparseRow x, double x_sq_norm,
                                  std::span<const double> center, double center_sq_norm);

// --- sparse text format (the standard `<label> <idx>:<val> ...` layout,
// --- 1-based indices on disk, 0-based in memory) ---

Dataset load_libsvm(const std::string& path);
void save_libsvm(const Dataset& ds, const std::string& path);

// --- splits and preprocessing ---

struct SplitSpec {
  std::uint64_t seed = 0;
  double test_fraction = 0.2;  // must leave >= 1 sample on each side
};

std::pair<Dataset, Dataset> shuffle_split(const Dataset& ds, const SplitSpec& spec);

struct FeatureStats {
  std::vector<double> mean;
  std::vector<double> stddev;  // population (1/n); 0 marks a constant feature
};

struct StandardizeResult {
  Dataset train;
  Dataset test;
  FeatureStats stats;
};

// Z-scores every feature using train statistics only; constant features map
// to 0. Output rows are dense (d entries each).
StandardizeResult standardize(const Dataset& train, const Dataset& test);
Dataset apply_feature_stats(const FeatureStats& stats, const Dataset& ds);

// Clustered synthetic regression data: c well-separated centers, unit-scale
// Gaussian spread, y = sin(||x - center||) + 3*cluster + noise*N(0,1).
Dataset synth_clustered(std::size_t n, std::size_t d, std::size_t c, double noise,
                        std::uint64_t seed);

// New dataset holding the given rows (in the given order).
Dataset subset(const Dataset& ds, std::span<const std::size_t> rows);

}  // namespace pkrr
