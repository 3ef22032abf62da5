#include "arclust/spectral.hpp"

#include <algorithm>
#include <limits>
#include <random>
#include <string>

#include "arclust/errors.hpp"
#include "arclust/refinement.hpp"

namespace arclust {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr int kMaxLloydIterations = 300;
constexpr double kCentroidShift = 1e-9;

Matrix kmeanspp_centers(const Matrix& points, int c, std::mt19937_64& rng) {
  const Index n = points.rows();
  Matrix centers(c, points.cols());
  std::uniform_int_distribution<Index> pick(0, n - 1);
  centers.row(0) = points.row(pick(rng));
  Vector closest = (points.rowwise() - centers.row(0)).rowwise().squaredNorm();
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int k = 1; k < c; ++k) {
    const double total = closest.sum();
    Index chosen = pick(rng);
    if (total > 0.0) {
      double target = unit(rng) * total;
      chosen = n - 1;
      for (Index i = 0; i < n; ++i) {
        target -= closest(i);
        if (target < 0.0) {
          chosen = i;
          break;
        }
      }
    }
    centers.row(k) = points.row(chosen);
    closest = closest.cwiseMin((points.rowwise() - centers.row(k)).rowwise().squaredNorm());
  }
  return centers;
}

struct LloydRun {
  std::vector<int> assignment;
  std::vector<Index> sizes;
  double inertia = 0.0;
};

LloydRun lloyd(const Matrix& points, Matrix centers) {
  const Index n = points.rows();
  const int c = static_cast<int>(centers.rows());
  LloydRun run;
  run.assignment.assign(static_cast<std::size_t>(n), 0);
  for (int iter = 0; iter < kMaxLloydIterations; ++iter) {
    for (Index i = 0; i < n; ++i) {
      Index best = 0;
      (centers.rowwise() - points.row(i)).rowwise().squaredNorm().minCoeff(&best);
      run.assignment[static_cast<std::size_t>(i)] = static_cast<int>(best);
    }
    Matrix sums = Matrix::Zero(c, points.cols());
    std::vector<Index> counts(static_cast<std::size_t>(c), 0);
    for (Index i = 0; i < n; ++i) {
      const int k = run.assignment[static_cast<std::size_t>(i)];
      sums.row(k) += points.row(i);
      ++counts[static_cast<std::size_t>(k)];
    }
    double shift = 0.0;
    for (int k = 0; k < c; ++k) {
      if (counts[static_cast<std::size_t>(k)] == 0) continue;  // keep the old centroid
      const Eigen::RowVectorXd updated = sums.row(k) / static_cast<double>(counts[static_cast<std::size_t>(k)]);
      shift = std::max(shift, (updated - centers.row(k)).norm());
      centers.row(k) = updated;
    }
    if (shift < kCentroidShift) break;
  }
  run.sizes.assign(static_cast<std::size_t>(c), 0);
  for (Index i = 0; i < n; ++i) {
    const int k = run.assignment[static_cast<std::size_t>(i)];
    ++run.sizes[static_cast<std::size_t>(k)];
    run.inertia += (points.row(i) - centers.row(k)).squaredNorm();
  }
  return run;
}

Clustering relabel_by_first_appearance(const std::vector<int>& raw, int c) {
  std::vector<int> mapping(static_cast<std::size_t>(c), -1);
  int next = 0;
  Clustering out;
  out.c = c;
  out.sizes.assign(static_cast<std::size_t>(c), 0);
  out.assignment.reserve(raw.size());
  for (int k : raw) {
    int& m = mapping[static_cast<std::size_t>(k)];
    if (m < 0) m = next++;
    out.assignment.push_back(m);
    ++out.sizes[static_cast<std::size_t>(m)];
  }
  return out;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
  return splitmix64(splitmix64(seed ^ splitmix64(stream)) + counter);
}

KMeansResult kmeans(const Matrix& points, int c, std::uint64_t seed, int restarts) {
  const Index n = points.rows();
  if (c < 1 || c > n) {
    throw Error(ErrorKind::validation, "k-means needs 1 <= c <= n (c=" + std::to_string(c) + ", n=" +
                                           std::to_string(n) + ")");
  }
  if (restarts < 1) throw Error(ErrorKind::validation, "k-means needs at least one restart");
  if (c == 1) {
    KMeansResult single;
    single.clustering = {std::vector<int>(static_cast<std::size_t>(n), 0), 1, {n}};
    single.inertia = (points.rowwise() - points.colwise().mean()).squaredNorm();
    return single;
  }
  bool found = false;
  LloydRun best;
  for (int r = 0; r < restarts; ++r) {
    std::mt19937_64 rng(derive_seed(seed, 0x6b6d65616e73ULL, static_cast<std::uint64_t>(r)));
    LloydRun run = lloyd(points, kmeanspp_centers(points, c, rng));
    const bool empty = std::find(run.sizes.begin(), run.sizes.end(), 0) != run.sizes.end();
    if (empty) continue;
    if (!found || run.inertia < best.inertia) {
      best = std::move(run);
      found = true;
    }
  }
  if (!found) {
    throw Error(ErrorKind::numerical, "k-means left a cluster empty in all " + std::to_string(restarts) +
                                          " restarts (c=" + std::to_string(c) + ")");
  }
  return {relabel_by_first_appearance(best.assignment, c), best.inertia};
}

Clustering cluster_embedding(const Matrix& eigenvectors, LaplacianMode mode, std::uint64_t seed, int restarts) {
  Matrix points = eigenvectors;
  if (mode == LaplacianMode::normalized) {
    for (Index i = 0; i < points.rows(); ++i) {
      const double norm = points.row(i).norm();
      if (norm > 0.0) points.row(i) /= norm;
    }
  }
  return kmeans(points, static_cast<int>(eigenvectors.cols()), seed, restarts).clustering;
}

Clustering spectral_cluster(const Matrix& similarity, int c, LaplacianMode mode, std::uint64_t seed, int restarts,
                            const EigenOptions& eigen) {
  if (c < 1 || c > similarity.rows()) throw Error(ErrorKind::validation, "spectral clustering needs 1 <= c <= n");
  const Eigenpairs pairs = smallest_eigenpairs(laplacian(similarity, mode), c, eigen);
  return cluster_embedding(pairs.vectors, mode, seed, restarts);
}

Clustering spectral_cluster(const SparseMatrix& similarity, int c, LaplacianMode mode, std::uint64_t seed,
                            int restarts, const EigenOptions& eigen) {
  if (c < 1 || c > similarity.rows()) throw Error(ErrorKind::validation, "spectral clustering needs 1 <= c <= n");
  const Eigenpairs pairs = smallest_eigenpairs(laplacian(similarity, mode), c, eigen);
  return cluster_embedding(pairs.vectors, mode, seed, restarts);
}

}  // namespace arclust
