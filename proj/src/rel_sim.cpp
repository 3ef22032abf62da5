#include "arclust/rel_sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "arclust/errors.hpp"

namespace arclust {

const PathEntry* PathProfile::find(Index src, Index dst) const {
  const auto& row = by_source.at(static_cast<std::size_t>(src));
  auto it = std::lower_bound(row.begin(), row.end(), dst,
                             [](const PathEntry& e, Index target) { return e.target < target; });
  return (it != row.end() && it->target == dst) ? &*it : nullptr;
}

namespace {

std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) {
  return (a > std::numeric_limits<std::uint64_t>::max() - b) ? std::numeric_limits<std::uint64_t>::max() : a + b;
}

void check_delta(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw Error(ErrorKind::validation, "delta must lie strictly in (0,1)");
}

template <typename Ratio>
Matrix path_similarity(const PathProfile& profile, double delta, Ratio ratio) {
  check_delta(delta);
  const Index n = static_cast<Index>(profile.by_source.size());
  Matrix s = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    for (const PathEntry& p : profile.by_source[static_cast<std::size_t>(i)]) {
      const double far = std::pow(delta, p.length);
      const double near = std::pow(delta, p.length - 1);
      const double r = std::clamp(ratio(i, p), 0.0, 1.0);
      s(i, p.target) = far + (near - far) * r;
    }
  }
  return s;
}

}  // namespace

std::pair<PathProfile, FrontTable> bfs_path_profile(const std::vector<std::vector<Index>>& adj, int theta) {
  if (theta < 1) throw Error(ErrorKind::validation, "theta must be >= 1");
  const Index n = static_cast<Index>(adj.size());
  PathProfile profile;
  profile.theta = theta;
  profile.by_source.resize(adj.size());
  FrontTable fronts;
  fronts.sizes = Eigen::Matrix<Index, Eigen::Dynamic, Eigen::Dynamic>::Zero(n, theta);
  fronts.max_per_step.assign(static_cast<std::size_t>(theta), 0);

  std::vector<int> depth(adj.size(), -1);
  std::vector<std::uint64_t> paths(adj.size(), 0);
  std::vector<Index> frontier, next, touched;
  for (Index src = 0; src < n; ++src) {
    touched.assign(1, src);
    depth[src] = 0;
    paths[src] = 1;
    frontier.assign(1, src);
    for (int level = 0; level < theta && !frontier.empty(); ++level) {
      fronts.sizes(src, level) = static_cast<Index>(frontier.size());
      next.clear();
      for (Index u : frontier) {
        for (Index v : adj[static_cast<std::size_t>(u)]) {
          if (depth[v] < 0) {
            depth[v] = level + 1;
            next.push_back(v);
            touched.push_back(v);
          }
          if (depth[v] == level + 1) paths[v] = saturating_add(paths[v], paths[u]);
        }
      }
      frontier.swap(next);
    }
    auto& row = profile.by_source[static_cast<std::size_t>(src)];
    for (Index v : touched) {
      if (v != src) row.push_back({v, depth[v], paths[v]});
      depth[v] = -1;
      paths[v] = 0;
    }
    std::sort(row.begin(), row.end(), [](const PathEntry& a, const PathEntry& b) { return a.target < b.target; });
  }
  for (int t = 0; t < theta; ++t) {
    fronts.max_per_step[static_cast<std::size_t>(t)] = n > 0 ? fronts.sizes.col(t).maxCoeff() : 0;
  }
  return {std::move(profile), std::move(fronts)};
}

std::pair<PathProfile, FrontTable> bfs_path_profile(const AttributedNetwork& net, int theta) {
  return bfs_path_profile(net.out_adjacency(), theta);
}

Matrix similarity_front_relative(const PathProfile& profile, const FrontTable& fronts, double delta) {
  return path_similarity(profile, delta, [&](Index i, const PathEntry& p) {
    const double extra = static_cast<double>(p.count) - 1.0;
    const double denom = static_cast<double>(fronts.sizes(i, p.length - 1)) - 1.0;
    if (extra <= 0.0) return 0.0;
    if (denom <= 0.0) return 1.0;
    return extra / denom;
  });
}

Matrix similarity_front_max(const PathProfile& profile, const FrontTable& fronts, double delta) {
  return path_similarity(profile, delta, [&](Index, const PathEntry& p) {
    const double extra = static_cast<double>(p.count) - 1.0;
    const double denom = static_cast<double>(fronts.max_per_step[static_cast<std::size_t>(p.length - 1)]);
    if (extra <= 0.0) return 0.0;
    return extra / denom;
  });
}

Matrix symmetrize(const Matrix& m) { return 0.5 * (m + m.transpose()); }

}  // namespace arclust
