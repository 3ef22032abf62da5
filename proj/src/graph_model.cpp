#include "arclust/graph_model.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <string_view>

#include "arclust/errors.hpp"

namespace arclust {

const char* to_string(AttrMode mode) {
  return mode == AttrMode::gaussian ? "gaussian" : "cosine";
}

const char* to_string(LaplacianMode mode) {
  return mode == LaplacianMode::normalized ? "normalized" : "unnormalized";
}

const char* to_string(NmiNormalization mode) {
  switch (mode) {
    case NmiNormalization::arithmetic: return "arithmetic";
    case NmiNormalization::geometric: return "geometric";
    case NmiNormalization::max: return "max";
  }
  return "unknown";
}

AttributedNetwork::AttributedNetwork(Matrix attributes, std::vector<Edge> edges,
                                     std::optional<std::vector<int>> labels)
    : attributes_(std::move(attributes)), edges_(std::move(edges)), labels_(std::move(labels)) {
  const Index n = attributes_.rows();
  if (n == 0 || attributes_.cols() == 0) {
    throw Error(ErrorKind::validation, "attribute matrix must have at least one row and one column");
  }
  if (!attributes_.allFinite()) {
    throw Error(ErrorKind::validation, "attribute matrix contains non-finite values");
  }
  for (const Edge& e : edges_) {
    if (e.src < 0 || e.src >= n || e.dst < 0 || e.dst >= n) {
      throw Error(ErrorKind::validation, "edge " + std::to_string(e.src) + " -> " + std::to_string(e.dst) +
                                             " has an endpoint outside [0, " + std::to_string(n) + ")");
    }
    if (e.src == e.dst) {
      throw Error(ErrorKind::validation, "self-loop on object " + std::to_string(e.src));
    }
  }
  std::sort(edges_.begin(), edges_.end());
  const auto before = edges_.size();
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
  duplicate_edges_ = before - edges_.size();
  if (labels_ && static_cast<Index>(labels_->size()) != n) {
    throw Error(ErrorKind::validation, "labels cover " + std::to_string(labels_->size()) + " objects, expected " +
                                           std::to_string(n));
  }
}

std::vector<std::vector<Index>> AttributedNetwork::out_adjacency() const {
  std::vector<std::vector<Index>> adj(static_cast<std::size_t>(size()));
  for (const Edge& e : edges_) adj[static_cast<std::size_t>(e.src)].push_back(e.dst);
  return adj;
}

bool AttributedNetwork::operator==(const AttributedNetwork& other) const {
  return attributes_.rows() == other.attributes_.rows() && attributes_.cols() == other.attributes_.cols() &&
         attributes_ == other.attributes_ && edges_ == other.edges_ && labels_ == other.labels_;
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

bool skippable(std::string_view line) {
  const auto t = trim(line);
  return t.empty() || t.front() == '#';
}

template <typename T>
bool parse_number(std::string_view token, T& out) {
  token = trim(token);
  if (token.empty()) return false;
  if (token.front() == '+') token.remove_prefix(1);
  const char* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, out);
  return ec == std::errc() && ptr == end;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot open " + path.string());
  return in;
}

Matrix read_attributes(const std::filesystem::path& path) {
  auto in = open_input(path);
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (skippable(line)) continue;
    std::vector<double> row;
    std::string_view rest(line);
    while (true) {
      const auto comma = rest.find(',');
      const auto token = rest.substr(0, comma);
      double v = 0.0;
      if (!parse_number(token, v)) {
        throw ParseError(path.string(), line_no, "non-numeric attribute '" + std::string(trim(token)) + "'");
      }
      if (!std::isfinite(v)) throw ParseError(path.string(), line_no, "non-finite attribute");
      row.push_back(v);
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw ParseError(path.string(), line_no,
                       "expected " + std::to_string(rows.front().size()) + " columns, found " +
                           std::to_string(row.size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error(ErrorKind::validation, path.string() + ": no attribute rows");
  Matrix attrs(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t k = 0; k < rows[i].size(); ++k) attrs(static_cast<Index>(i), static_cast<Index>(k)) = rows[i][k];
  }
  return attrs;
}

std::vector<Edge> read_edges(const std::filesystem::path& path, Index n) {
  auto in = open_input(path);
  std::vector<Edge> edges;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (skippable(line)) continue;
    std::istringstream fields(line);
    std::string a, b, extra;
    if (!(fields >> a >> b) || (fields >> extra)) {
      throw ParseError(path.string(), line_no, "expected 'src dst'");
    }
    long long src = 0, dst = 0;
    if (!parse_number(a, src) || !parse_number(b, dst)) {
      throw ParseError(path.string(), line_no, "edge endpoints must be integers");
    }
    if (src < 0 || dst < 0 || src >= n || dst >= n) {
      throw Error(ErrorKind::validation, path.string() + ":" + std::to_string(line_no) + ": edge " + a + " " + b +
                                             " out of range for n=" + std::to_string(n));
    }
    if (src == dst) {
      throw Error(ErrorKind::validation,
                  path.string() + ":" + std::to_string(line_no) + ": self-loop on object " + a);
    }
    edges.push_back({static_cast<Index>(src), static_cast<Index>(dst)});
  }
  return edges;
}

std::vector<int> read_labels(const std::filesystem::path& path, Index n) {
  auto in = open_input(path);
  std::vector<std::optional<int>> labels(static_cast<std::size_t>(n));
  std::string line;
  std::size_t line_no = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (skippable(line)) continue;
    const auto t = trim(line);
    if (first && t == "id,label") {
      first = false;
      continue;
    }
    first = false;
    const auto comma = t.find(',');
    long long id = 0;
    int label = 0;
    if (comma == std::string_view::npos || !parse_number(t.substr(0, comma), id) ||
        !parse_number(t.substr(comma + 1), label)) {
      throw ParseError(path.string(), line_no, "expected 'id,label' with integer fields");
    }
    if (id < 0 || id >= n) {
      throw Error(ErrorKind::validation,
                  path.string() + ":" + std::to_string(line_no) + ": label id " + std::to_string(id) + " out of range");
    }
    auto& slot = labels[static_cast<std::size_t>(id)];
    if (slot) {
      throw Error(ErrorKind::validation,
                  path.string() + ":" + std::to_string(line_no) + ": duplicate label for id " + std::to_string(id));
    }
    slot = label;
  }
  std::vector<int> out(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (!labels[i]) throw Error(ErrorKind::validation, path.string() + ": no label for object " + std::to_string(i));
    out[i] = *labels[i];
  }
  return out;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::io, "cannot write " + path.string());
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  return out;
}

}  // namespace

AttributedNetwork load_network(const std::filesystem::path& attr_path, const std::filesystem::path& edge_path,
                               const std::optional<std::filesystem::path>& label_path) {
  Matrix attrs = read_attributes(attr_path);
  const Index n = attrs.rows();
  auto edges = read_edges(edge_path, n);
  std::optional<std::vector<int>> labels;
  if (label_path) labels = read_labels(*label_path, n);
  AttributedNetwork net(std::move(attrs), std::move(edges), std::move(labels));
  if (net.duplicate_edges() > 0) {
    spdlog::warn("{}: dropped {} duplicate edge(s)", edge_path.string(), net.duplicate_edges());
  }
  return net;
}

void save_network(const AttributedNetwork& net, const std::filesystem::path& attr_path,
                  const std::filesystem::path& edge_path, const std::optional<std::filesystem::path>& label_path) {
  {
    auto out = open_output(attr_path);
    const Matrix& a = net.attributes();
    for (Index i = 0; i < a.rows(); ++i) {
      for (Index k = 0; k < a.cols(); ++k) out << (k ? "," : "") << a(i, k);
      out << '\n';
    }
  }
  {
    auto out = open_output(edge_path);
    for (const Edge& e : net.edges()) out << e.src << ' ' << e.dst << '\n';
  }
  if (label_path && net.labels()) {
    auto out = open_output(*label_path);
    const auto& labels = *net.labels();
    for (std::size_t i = 0; i < labels.size(); ++i) out << i << ',' << labels[i] << '\n';
  }
}

PipelineConfig validate_config(PipelineConfig cfg, const AttributedNetwork& net) {
  const Index n = net.size();
  std::vector<std::string> problems;
  if (cfg.c < 2 || cfg.c > n) problems.push_back("c must satisfy 2 <= c <= n (n=" + std::to_string(n) + ")");
  if (!(cfg.delta > 0.0 && cfg.delta < 1.0)) problems.push_back("delta must lie strictly in (0,1)");
  if (cfg.theta < 1) problems.push_back("theta must be >= 1");
  if (cfg.attr_mode == AttrMode::gaussian) {
    if (!cfg.sigma) {
      problems.push_back("sigma is required in gaussian attribute mode");
    } else if (!(*cfg.sigma > 0.0) || !std::isfinite(*cfg.sigma)) {
      problems.push_back("sigma must be > 0");
    }
    if (cfg.pca_dims && (*cfg.pca_dims < 1 || *cfg.pca_dims > net.dims())) {
      problems.push_back("pca_dims must lie in [1, d] (d=" + std::to_string(net.dims()) + ")");
    }
  }
  if (!(cfg.alpha >= 0.0)) problems.push_back("alpha must be >= 0");
  if (!(cfg.beta >= 0.0)) problems.push_back("beta must be >= 0");
  if (!(cfg.gamma0 > 0.0)) problems.push_back("gamma0 must be > 0");
  if (!cfg.m) cfg.m = std::max(cfg.c, 50);
  if (*cfg.m < cfg.c) problems.push_back("m must be >= c");
  if (cfg.max_iters < 0) problems.push_back("max_iters must be >= 0");
  if (cfg.kmeans_restarts < 1) problems.push_back("kmeans_restarts must be >= 1");
  if (cfg.dense_eigen_limit < 1) problems.push_back("dense_eigen_limit must be >= 1");
  if (!problems.empty()) {
    std::string msg = "invalid configuration";
    for (const auto& p : problems) msg += "; " + p;
    throw Error(ErrorKind::validation, msg);
  }
  return cfg;
}

}  // namespace arclust
