#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "arclust/fusion.hpp"
#include "arclust/graph_model.hpp"
#include "arclust/refinement.hpp"
#include "arclust/spectral.hpp"

namespace arclust {

/// Base matrices, their initial weights and the vectors the silhouette is
/// measured on (PCA projections in gaussian mode, raw attributes in cosine
/// mode).
struct DerivedBases {
  BaseMatrixSet bases;
  Vector initial_lambda;
  Matrix silhouette_features;
  /// Contribution ratios of the retained principal components (gaussian mode).
  Vector contribution_ratios;
  std::vector<std::string> warnings;
};

DerivedBases derive_bases(const AttributedNetwork& net, const PipelineConfig& cfg);

enum class StopReason { silhouette_local_max, objective_converged, iteration_cap };
const char* to_string(StopReason reason);

struct TraceRow {
  int iter = 0;
  double objective = 0.0;
  double gamma = 0.0;
  double mean_silhouette = 0.0;
  std::optional<double> nmi;
  std::optional<double> purity;
};

struct RunResult {
  Clustering final_clustering;
  /// Iteration whose clustering is reported (stop, conv or the cap).
  int reported_iteration = 0;
  /// Refinement sweeps executed; the trace holds iterations + 1 rows.
  int iterations = 0;
  StopReason stop_reason = StopReason::iteration_cap;
  std::vector<TraceRow> trace;
  std::vector<Clustering> clusterings;  // one per trace row
  PipelineConfig config;
  Vector final_lambda;
  /// Fused, unrefined similarity matrix (iteration 0).
  Matrix s_iter0;
  /// Similarity matrix behind the reported clustering.
  SparseMatrix s_final;
  double mean_silhouette = 0.0;
  std::optional<double> nmi;
  std::optional<double> purity;
  std::vector<std::string> warnings;
};

/// k-means stream used for the clustering of iteration t:
/// derive_seed(cfg.seed, kKMeansStream, t).
inline constexpr std::uint64_t kKMeansStream = 0x636c7573746572ULL;

/// Derives and fuses the base matrices, then alternates clustering S*_iter,
/// scoring it and refining it until the silhouette rule, objective
/// convergence or max_iters ends the loop. Errors carry the failing phase.
RunResult run_pipeline(const AttributedNetwork& net, PipelineConfig cfg);

/// Writes assignments.csv, metrics.json and trace.csv into `out_dir`
/// (created if needed) and, with `dump_matrices`, S_iter0.txt and
/// S_final.txt as "row col value" triples sorted by (row, col).
void emit_outputs(const RunResult& result, const std::filesystem::path& out_dir, bool dump_matrices);

/// JSON text of the resolved configuration.
std::string config_json(const PipelineConfig& cfg);

}  // namespace arclust
