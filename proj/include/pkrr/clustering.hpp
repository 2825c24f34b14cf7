#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pkrr/dataset.hpp"

namespace pkrr {

struct Clustering {
  int k = 0;
  std::size_t d = 0;
  std::vector<std::vector<double>> centers;  // k dense d-vectors
  std::vector<int> membership;               // per-sample cluster index
  std::vector<std::size_t> sizes;            // per-cluster counts
};

struct KMeansParams {
  double threshold = 0.01;  // stop when changed fraction <= threshold
  int max_iters = 100;
  bool recompute_centers = true;  // k-balance only: re-average after the scan
};

struct KMeansDiag {
  int iterations = 0;
  std::vector<double> wcss;  // within-cluster sum of squares after each update
};

// Lloyd iterations. Centers start at k distinct samples drawn with the seeded
// generator; ties in the assignment go to the lowest index; an emptied
// cluster is reseeded to the sample farthest from its assigned center.
Clustering kmeans(const Dataset& X, int k, std::uint64_t seed,
                  const KMeansParams& params = {}, KMeansDiag* diag = nullptr);

// K-means warm start, then one sequential scan in row order assigning each
// sample to its nearest center that still has capacity. Capacities are
// two-tier: a cluster may grow past floor(n/k) only while fewer than n mod k
// clusters have done so, which pins every size to floor(n/k) or ceil(n/k).
Clustering kbalance(const Dataset& X, int k, std::uint64_t seed,
                    const KMeansParams& params = {});

// argmin_j ||x - centers[j]||, lowest index on ties.
int nearest_center(const Clustering& c, SparseRow x);
int nearest_center(const std::vector<std::vector<double>>& centers, SparseRow x);

// Text artifact: header "k d n", k center rows, n membership lines.
void save_clustering(const Clustering& c, const std::string& path);
Clustering load_clustering(const std::string& path);

}  // namespace pkrr
