// Command-line front end: cluster an attributed network and write the
// assignments, metrics and trace files.

#include <spdlog/spdlog.h>

#include <CLI11.hpp>
#include <charconv>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "arclust/errors.hpp"
#include "arclust/graph_model.hpp"
#include "arclust/pipeline.hpp"

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitNumerical = 2;

std::optional<int> parse_auto_int(const std::string& text, const char* flag) {
  if (text == "auto") return std::nullopt;
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw arclust::Error(arclust::ErrorKind::validation, std::string(flag) + " expects an integer or 'auto'");
  }
  return value;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cluster an attributed network with refined similarity matrices"};
  app.name("cluster");

  std::string attrs, edges, labels, out_dir, pca_dims = "auto", m = "auto";
  arclust::PipelineConfig cfg;
  double sigma = 0.0;
  bool dump_matrices = false, verbose = false, no_silhouette_stop = false;

  const std::map<std::string, arclust::AttrMode> attr_modes{{"gaussian", arclust::AttrMode::gaussian},
                                                            {"cosine", arclust::AttrMode::cosine}};
  const std::map<std::string, arclust::LaplacianMode> laplacians{
      {"normalized", arclust::LaplacianMode::normalized}, {"unnormalized", arclust::LaplacianMode::unnormalized}};
  const std::map<std::string, arclust::NmiNormalization> nmi_modes{
      {"arithmetic", arclust::NmiNormalization::arithmetic},
      {"geometric", arclust::NmiNormalization::geometric},
      {"max", arclust::NmiNormalization::max}};

  app.add_option("--attrs", attrs, "Attribute CSV, one row per object")->required()->check(CLI::ExistingFile);
  app.add_option("--edges", edges, "Edge list, 'src dst' per line")->required()->check(CLI::ExistingFile);
  app.add_option("--labels", labels, "Ground-truth labels, 'id,label' per line")->check(CLI::ExistingFile);
  app.add_option("--c", cfg.c, "Number of clusters")->required();
  app.add_option("--theta", cfg.theta, "Longest shortest path considered")->capture_default_str();
  app.add_option("--delta", cfg.delta, "Per-hop similarity decay in (0,1)")->capture_default_str();
  auto* sigma_opt = app.add_option("--sigma", sigma, "Gaussian bandwidth (gaussian mode)");
  app.add_option("--attr-mode", cfg.attr_mode, "gaussian or cosine")
      ->transform(CLI::CheckedTransformer(attr_modes, CLI::ignore_case))
      ->capture_default_str();
  app.add_option("--pca-dims", pca_dims, "Principal components kept, or 'auto'")->capture_default_str();
  app.add_option("--laplacian", cfg.laplacian_mode, "normalized or unnormalized")
      ->transform(CLI::CheckedTransformer(laplacians, CLI::ignore_case))
      ->capture_default_str();
  app.add_option("--alpha", cfg.alpha, "Frobenius regulariser on S*")->capture_default_str();
  app.add_option("--beta", cfg.beta, "L2 regulariser on the fusion weights")->capture_default_str();
  app.add_option("--gamma", cfg.gamma0, "Initial weight of the rank term")->capture_default_str();
  app.add_option("--m", m, "Non-zeros kept per row of S*, or 'auto' for max(c, 50)")->capture_default_str();
  app.add_option("--max-iters", cfg.max_iters, "Refinement sweep cap")->capture_default_str();
  app.add_option("--seed", cfg.seed, "Seed for k-means")->capture_default_str();
  app.add_option("--restarts", cfg.kmeans_restarts, "k-means restarts")->capture_default_str();
  app.add_option("--nmi", cfg.nmi_normalization, "NMI normalisation: arithmetic, geometric or max")
      ->transform(CLI::CheckedTransformer(nmi_modes, CLI::ignore_case))
      ->capture_default_str();
  app.add_option("--dense-eigen-limit", cfg.dense_eigen_limit, "Largest order solved densely")
      ->capture_default_str();
  app.add_flag("--no-silhouette-stop", no_silhouette_stop, "Refine until the objective converges");
  app.add_option("--out", out_dir, "Output directory")->required();
  app.add_flag("--dump-matrices", dump_matrices, "Write S_iter0.txt and S_final.txt");
  app.add_flag("-v,--verbose", verbose, "Log every iteration");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }
  if (verbose) spdlog::set_level(spdlog::level::debug);

  try {
    if (*sigma_opt) cfg.sigma = sigma;
    cfg.pca_dims = parse_auto_int(pca_dims, "--pca-dims");
    cfg.m = parse_auto_int(m, "--m");
    cfg.stop_on_silhouette = !no_silhouette_stop;

    const auto net = arclust::load_network(attrs, edges, labels.empty() ? std::nullopt : std::optional(labels));
    const auto result = arclust::run_pipeline(net, cfg);
    arclust::emit_outputs(result, out_dir, dump_matrices);

    std::cout << "stop_reason=" << arclust::to_string(result.stop_reason)
              << " reported_iteration=" << result.reported_iteration << " iterations=" << result.iterations
              << " mean_silhouette=" << result.mean_silhouette;
    if (result.nmi) std::cout << " nmi=" << *result.nmi << " purity=" << *result.purity;
    std::cout << '\n';
  } catch (const arclust::Error& e) {
    std::cerr << e.what() << '\n';
    return e.kind() == arclust::ErrorKind::numerical ? kExitNumerical : kExitValidation;
  }
  return 0;
}
