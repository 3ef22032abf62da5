#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "arclust/graph_model.hpp"
#include "arclust/types.hpp"

namespace arclust {

/// Shortest directed path from a source to `target`: its length and the
/// number of distinct shortest paths (saturating at UINT64_MAX).
struct PathEntry {
  Index target = 0;
  int length = 0;
  std::uint64_t count = 0;
};

/// For every source, the objects reachable within theta steps, sorted by
/// target id. Unreachable pairs are absent.
struct PathProfile {
  int theta = 0;
  std::vector<std::vector<PathEntry>> by_source;

  const PathEntry* find(Index src, Index dst) const;
};

/// |Front(i, t)| for t in [0, theta-1], the objects first reached from i in
/// exactly t steps, and the per-step maximum over all sources.
struct FrontTable {
  Eigen::Matrix<Index, Eigen::Dynamic, Eigen::Dynamic> sizes;  // n x theta
  std::vector<Index> max_per_step;                             // theta entries
};

std::pair<PathProfile, FrontTable> bfs_path_profile(const std::vector<std::vector<Index>>& out_adjacency,
                                                    int theta);
std::pair<PathProfile, FrontTable> bfs_path_profile(const AttributedNetwork& net, int theta);

/// delta^s + (delta^(s-1) - delta^s) * ratio, with ratio = (e-1)/(|Front(i,s-1)|-1)
/// clamped to [0,1]. A one-element front counts as ratio 0 for e = 1 and 1
/// otherwise. Not symmetric.
Matrix similarity_front_relative(const PathProfile& profile, const FrontTable& fronts, double delta);

/// Same shape with ratio = (e-1)/Front(s-1)_max, clamped to [0,1].
Matrix similarity_front_max(const PathProfile& profile, const FrontTable& fronts, double delta);

/// (M + M^T) / 2.
Matrix symmetrize(const Matrix& m);

}  // namespace arclust
