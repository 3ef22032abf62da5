#include "arclust/pipeline.hpp"

#include <spdlog/spdlog.h>

#include <fstream>
#include <iomanip>
#include <json.hpp>
#include <limits>
#include <utility>

#include "arclust/attr_sim.hpp"
#include "arclust/errors.hpp"
#include "arclust/rel_sim.hpp"
#include "arclust/validity.hpp"

namespace arclust {

const char* to_string(StopReason reason) {
  switch (reason) {
    case StopReason::silhouette_local_max: return "silhouette-local-max";
    case StopReason::objective_converged: return "objective-converged";
    case StopReason::iteration_cap: return "iteration-cap";
  }
  return "unknown";
}

namespace {

template <typename F>
auto in_phase(const char* phase, F&& body) -> decltype(body()) {
  try {
    return body();
  } catch (const Error& e) {
    if (!e.phase().empty()) throw;
    throw e.with_phase(phase);
  }
}

void add_base(DerivedBases& out, Matrix m, std::string name) {
  RowNormalized norm = row_normalize(m);
  if (!norm.zero_rows.empty()) {
    out.warnings.push_back(name + ": " + std::to_string(norm.zero_rows.size()) +
                           " isolated object(s) with an all-zero row");
  }
  out.bases.matrices.push_back(std::move(norm.matrix));
  out.bases.names.push_back(std::move(name));
}

nlohmann::json config_to_json(const PipelineConfig& cfg) {
  nlohmann::json j;
  j["c"] = cfg.c;
  j["theta"] = cfg.theta;
  j["delta"] = cfg.delta;
  j["sigma"] = cfg.sigma ? nlohmann::json(*cfg.sigma) : nlohmann::json(nullptr);
  j["pca_dims"] = cfg.pca_dims ? nlohmann::json(*cfg.pca_dims) : nlohmann::json("auto");
  j["attr_mode"] = to_string(cfg.attr_mode);
  j["laplacian"] = to_string(cfg.laplacian_mode);
  j["alpha"] = cfg.alpha;
  j["beta"] = cfg.beta;
  j["gamma0"] = cfg.gamma0;
  j["m"] = cfg.m ? nlohmann::json(*cfg.m) : nlohmann::json("auto");
  j["max_iters"] = cfg.max_iters;
  j["seed"] = cfg.seed;
  j["kmeans_restarts"] = cfg.kmeans_restarts;
  j["nmi_normalization"] = to_string(cfg.nmi_normalization);
  j["stop_on_silhouette"] = cfg.stop_on_silhouette;
  j["dense_eigen_limit"] = cfg.dense_eigen_limit;
  return j;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::io, "cannot write " + path.string());
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  return out;
}

void write_triples(const SparseMatrix& m, const std::filesystem::path& path) {
  auto out = open_output(path);
  for (Index i = 0; i < m.outerSize(); ++i) {
    for (SparseMatrix::InnerIterator it(m, i); it; ++it) out << i << ' ' << it.col() << ' ' << it.value() << '\n';
  }
  if (!out) throw Error(ErrorKind::io, "failed writing " + path.string());
}

}  // namespace

std::string config_json(const PipelineConfig& cfg) { return config_to_json(cfg).dump(); }

DerivedBases derive_bases(const AttributedNetwork& net, const PipelineConfig& cfg) {
  DerivedBases out;
  Vector ratios;
  if (cfg.attr_mode == AttrMode::gaussian) {
    PcaResult pca = cfg.pca_dims ? pca_reduce(net.attributes(), *cfg.pca_dims) : pca_reduce_auto(net.attributes());
    for (Index k = 0; k < pca.reduced.cols(); ++k) {
      add_base(out, gaussian_dim_similarity(pca.reduced, k, cfg.sigma.value()), "S_A" + std::to_string(k + 1));
    }
    ratios = pca.contribution_ratios;
    out.contribution_ratios = pca.contribution_ratios;
    out.silhouette_features = std::move(pca.reduced);
  } else {
    add_base(out, cosine_similarity_matrix(net.attributes()), "S_A");
    ratios = Vector::Ones(1);
    out.silhouette_features = net.attributes();
  }
  const auto [profile, fronts] = bfs_path_profile(net, cfg.theta);
  add_base(out, symmetrize(similarity_front_relative(profile, fronts, cfg.delta)), "S_La");
  add_base(out, symmetrize(similarity_front_max(profile, fronts, cfg.delta)), "S_Lb");
  out.initial_lambda = init_weights(ratios, out.bases.count());
  return out;
}

RunResult run_pipeline(const AttributedNetwork& net, PipelineConfig cfg) {
  cfg = in_phase("config", [&] { return validate_config(cfg, net); });
  DerivedBases derived = in_phase("similarity", [&] { return derive_bases(net, cfg); });
  for (const auto& w : derived.warnings) spdlog::warn("{}", w);

  RunResult result;
  result.config = cfg;
  result.warnings = derived.warnings;
  const RefinementSettings settings = RefinementSettings::from(cfg);
  const Refiner refiner(std::move(derived.bases), settings);
  result.s_iter0 = fuse(refiner.bases(), derived.initial_lambda);
  RefinementState state = in_phase("refinement", [&] { return refiner.init(derived.initial_lambda); });

  const auto& labels = net.labels();
  std::vector<double> silhouettes;
  SparseMatrix previous_s_star;
  Vector previous_lambda = state.lambda;

  for (int iter = 0;; ++iter) {
    const std::uint64_t seed = derive_seed(cfg.seed, kKMeansStream, static_cast<std::uint64_t>(iter));
    Clustering clustering = in_phase("clustering", [&] {
      if (iter == 0) {
        return spectral_cluster(result.s_iter0, cfg.c, cfg.laplacian_mode, seed, cfg.kmeans_restarts,
                                settings.eigen);
      }
      return cluster_embedding(state.embedding, cfg.laplacian_mode, seed, cfg.kmeans_restarts);
    });
    TraceRow row;
    row.iter = iter;
    row.objective = state.objective;
    row.gamma = state.gamma;
    row.mean_silhouette = in_phase("validity", [&] { return silhouette(clustering, derived.silhouette_features).mean; });
    if (labels) {
      row.nmi = nmi(clustering.assignment, *labels, cfg.nmi_normalization);
      row.purity = purity(clustering.assignment, *labels);
    }
    spdlog::debug("iter {} objective {:.6g} gamma {:.3g} m_sil {:.4f}", iter, row.objective, row.gamma,
                  row.mean_silhouette);
    silhouettes.push_back(row.mean_silhouette);
    result.trace.push_back(row);
    result.clusterings.push_back(std::move(clustering));

    std::optional<StopReason> reason;
    int reported = iter;
    if (cfg.stop_on_silhouette && stopping_check(silhouettes) == StopDecision::stop_at_previous) {
      reason = StopReason::silhouette_local_max;
      reported = iter - 1;
    } else if (iter >= 1 && state.converged) {
      reason = StopReason::objective_converged;
      reported = iter - 1;
    } else if (iter >= cfg.max_iters) {
      reason = StopReason::iteration_cap;
    }
    if (reason) {
      result.stop_reason = *reason;
      result.reported_iteration = reported;
      result.iterations = iter;
      if (reported == 0) {
        result.s_final = result.s_iter0.sparseView();
        result.final_lambda = derived.initial_lambda;
      } else if (reported == iter) {
        result.s_final = state.s_star;
        result.final_lambda = state.lambda;
      } else {
        result.s_final = previous_s_star;
        result.final_lambda = previous_lambda;
      }
      break;
    }
    previous_s_star = state.s_star;
    previous_lambda = state.lambda;
    in_phase("refinement", [&] { refiner.step(state); });
  }

  const auto reported = static_cast<std::size_t>(result.reported_iteration);
  result.final_clustering = result.clusterings[reported];
  result.mean_silhouette = result.trace[reported].mean_silhouette;
  result.nmi = result.trace[reported].nmi;
  result.purity = result.trace[reported].purity;
  return result;
}

void emit_outputs(const RunResult& result, const std::filesystem::path& out_dir, bool dump_matrices) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorKind::io, "cannot create " + out_dir.string() + ": " + ec.message());

  {
    auto out = open_output(out_dir / "assignments.csv");
    out << "id,cluster\n";
    const auto& a = result.final_clustering.assignment;
    for (std::size_t i = 0; i < a.size(); ++i) out << i << ',' << a[i] << '\n';
    if (!out) throw Error(ErrorKind::io, "failed writing " + (out_dir / "assignments.csv").string());
  }
  {
    nlohmann::json metrics;
    if (result.nmi) metrics["nmi"] = *result.nmi;
    if (result.purity) metrics["purity"] = *result.purity;
    metrics["mean_silhouette"] = result.mean_silhouette;
    metrics["stop_reason"] = to_string(result.stop_reason);
    metrics["iterations"] = result.iterations;
    metrics["reported_iteration"] = result.reported_iteration;
    metrics["lambda"] = std::vector<double>(result.final_lambda.data(),
                                            result.final_lambda.data() + result.final_lambda.size());
    metrics["warnings"] = result.warnings;
    metrics["config"] = config_to_json(result.config);
    auto out = open_output(out_dir / "metrics.json");
    out << metrics.dump(2) << '\n';
    if (!out) throw Error(ErrorKind::io, "failed writing " + (out_dir / "metrics.json").string());
  }
  {
    auto out = open_output(out_dir / "trace.csv");
    out << "iter,objective,m_sil,nmi\n";
    for (const TraceRow& row : result.trace) {
      out << row.iter << ',' << row.objective << ',' << row.mean_silhouette << ',';
      if (row.nmi) out << *row.nmi;
      out << '\n';
    }
    if (!out) throw Error(ErrorKind::io, "failed writing " + (out_dir / "trace.csv").string());
  }
  if (dump_matrices) {
    SparseMatrix iter0 = result.s_iter0.sparseView();
    write_triples(iter0, out_dir / "S_iter0.txt");
    write_triples(result.s_final, out_dir / "S_final.txt");
  }
}

}  // namespace arclust
