#pragma once

#include <atomic>
#include <chrono>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "arclust/fusion.hpp"
#include "arclust/graph_model.hpp"
#include "arclust/types.hpp"

namespace fixtures {

using arclust::Index;
using arclust::Matrix;

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    const auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
    path_ = std::filesystem::temp_directory_path() /
            ("arclust_test_" + std::to_string(stamp) + "_" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

void write_file(const std::filesystem::path& path, const std::string& text);

/// Weighted 8-node graph: two 4-node communities {0..3} and {4..7} joined by
/// a single bridge 3-4 that is the heaviest edge of both endpoints, so a
/// 2-nearest-neighbour graph keeps it.
Matrix toy_bridge_weights();

/// The same topology without the bridge (two components).
Matrix toy_two_components();

/// Attributed version of the bridge graph: 1-D attributes, directed edges
/// within each community and 3 -> 4, labels {0,0,0,0,1,1,1,1}.
arclust::AttributedNetwork toy_bridge_network();

/// Block-diagonal similarity with `blocks` dense blocks of the given size and
/// random positive weights.
Matrix block_similarity(int blocks, int block_size, std::mt19937_64& rng);

/// Planted-partition attributed network: `c` groups of `size` objects,
/// Gaussian attributes around group centres and random directed edges that
/// mostly stay within groups.
arclust::AttributedNetwork planted_network(int c, int size, int dims, double p_in, double p_out, double spread,
                                           std::mt19937_64& rng);

/// Random non-negative row-stochastic base matrices with zero diagonals.
arclust::BaseMatrixSet random_bases(Index n, Index k, std::mt19937_64& rng, double density = 1.0);

}  // namespace fixtures
