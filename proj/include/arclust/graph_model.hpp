#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "arclust/types.hpp"

namespace arclust {

struct Edge {
  Index src = 0;
  Index dst = 0;

  auto operator<=>(const Edge&) const = default;
};

/// Objects with real attribute vectors, directed relationships between them
/// and, optionally, ground-truth cluster labels used only for evaluation.
///
/// Object ids are the dense row indices of the attribute matrix. The edge
/// list is kept sorted by (src, dst) with duplicates removed. Instances are
/// immutable once constructed.
class AttributedNetwork {
 public:
  /// Throws Error(validation) on self-loops, out-of-range endpoints, an empty
  /// attribute matrix, non-finite attributes or a label vector of the wrong
  /// length.
  AttributedNetwork(Matrix attributes, std::vector<Edge> edges,
                    std::optional<std::vector<int>> labels = std::nullopt);

  Index size() const { return attributes_.rows(); }
  Index dims() const { return attributes_.cols(); }
  const Matrix& attributes() const { return attributes_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::optional<std::vector<int>>& labels() const { return labels_; }
  bool has_labels() const { return labels_.has_value(); }

  /// Number of repeated (src, dst) pairs dropped at construction.
  std::size_t duplicate_edges() const { return duplicate_edges_; }

  /// Sorted out-neighbour lists.
  std::vector<std::vector<Index>> out_adjacency() const;

  bool operator==(const AttributedNetwork& other) const;

 private:
  Matrix attributes_;
  std::vector<Edge> edges_;
  std::optional<std::vector<int>> labels_;
  std::size_t duplicate_edges_ = 0;
};

AttributedNetwork load_network(const std::filesystem::path& attr_path,
                               const std::filesystem::path& edge_path,
                               const std::optional<std::filesystem::path>& label_path = std::nullopt);

/// Writes the three files in the formats accepted by load_network. Labels are
/// written only when the network has them and a path is given.
void save_network(const AttributedNetwork& net, const std::filesystem::path& attr_path,
                  const std::filesystem::path& edge_path,
                  const std::optional<std::filesystem::path>& label_path = std::nullopt);

struct PipelineConfig {
  int c = 2;
  int theta = 3;
  double delta = 0.5;
  /// Required in gaussian mode; ignored in cosine mode.
  std::optional<double> sigma;
  /// nullopt selects the smallest count reaching 80% cumulative
  /// contribution, capped at 30.
  std::optional<int> pca_dims;
  AttrMode attr_mode = AttrMode::gaussian;
  LaplacianMode laplacian_mode = LaplacianMode::normalized;
  double alpha = 1.0;
  double beta = 1.0;
  double gamma0 = 1.0;
  /// nullopt resolves to max(c, 50).
  std::optional<int> m;
  int max_iters = 50;
  std::uint64_t seed = 0;
  int kmeans_restarts = 10;
  NmiNormalization nmi_normalization = NmiNormalization::arithmetic;
  /// When false the refinement runs to objective convergence (or the cap)
  /// without the silhouette stopping rule.
  bool stop_on_silhouette = true;
  /// Largest graph (or connected component) handed to the dense eigensolver.
  Index dense_eigen_limit = 3000;
};

/// Checks every PipelineConfig invariant against `net` and returns a copy with
/// `m` resolved. All violations are collected into one Error(validation).
PipelineConfig validate_config(PipelineConfig cfg, const AttributedNetwork& net);

}  // namespace arclust
