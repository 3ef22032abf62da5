#pragma once

#include <cstdint>
#include <vector>

#include "arclust/eigensolver.hpp"
#include "arclust/types.hpp"

namespace arclust {

/// Hard assignment of n objects to c non-empty clusters.
struct Clustering {
  std::vector<int> assignment;
  int c = 0;
  std::vector<Index> sizes;

  Index size() const { return static_cast<Index>(assignment.size()); }
};

struct KMeansResult {
  Clustering clustering;
  /// Within-cluster sum of squared distances.
  double inertia = 0.0;
};

/// splitmix64-based stream derivation: independent seeds per (stream, counter).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter);

/// Lloyd's algorithm with k-means++ seeding; the restart with the lowest
/// inertia among those ending with no empty cluster wins. Cluster ids are
/// numbered by first appearance. Throws Error(numerical) when every restart
/// leaves a cluster empty.
KMeansResult kmeans(const Matrix& points, int c, std::uint64_t seed, int restarts);

/// k-means on the rows of an n x c eigenvector block, after scaling each row to
/// unit length in normalized mode.
Clustering cluster_embedding(const Matrix& eigenvectors, LaplacianMode mode, std::uint64_t seed, int restarts);

Clustering spectral_cluster(const Matrix& similarity, int c, LaplacianMode mode, std::uint64_t seed, int restarts,
                            const EigenOptions& eigen = {});
Clustering spectral_cluster(const SparseMatrix& similarity, int c, LaplacianMode mode, std::uint64_t seed,
                            int restarts, const EigenOptions& eigen = {});

}  // namespace arclust
