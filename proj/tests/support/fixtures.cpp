#include "fixtures.hpp"

#include <fstream>
#include <stdexcept>

namespace fixtures {

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

namespace {

void link(Matrix& w, Index a, Index b, double v) {
  w(a, b) = v;
  w(b, a) = v;
}

}  // namespace

Matrix toy_two_components() {
  Matrix w = Matrix::Zero(8, 8);
  link(w, 0, 1, 0.6);
  link(w, 0, 2, 0.5);
  link(w, 1, 2, 0.7);
  link(w, 1, 3, 0.4);
  link(w, 2, 3, 0.6);
  link(w, 4, 5, 0.6);
  link(w, 4, 6, 0.4);
  link(w, 5, 6, 0.7);
  link(w, 5, 7, 0.5);
  link(w, 6, 7, 0.6);
  return w;
}

Matrix toy_bridge_weights() {
  Matrix w = toy_two_components();
  link(w, 3, 4, 0.9);
  return w;
}

arclust::AttributedNetwork toy_bridge_network() {
  Matrix attrs(8, 1);
  attrs << 0.0, 0.1, 0.15, 0.35, 0.65, 0.85, 0.9, 1.0;
  std::vector<arclust::Edge> edges{{0, 1}, {1, 2}, {2, 0}, {1, 3}, {3, 2}, {2, 1},
                                   {4, 5}, {5, 6}, {6, 4}, {5, 7}, {7, 6}, {6, 5}, {3, 4}};
  return arclust::AttributedNetwork(attrs, edges, std::vector<int>{0, 0, 0, 0, 1, 1, 1, 1});
}

Matrix block_similarity(int blocks, int block_size, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> weight(0.2, 1.0);
  const Index n = static_cast<Index>(blocks) * block_size;
  Matrix s = Matrix::Zero(n, n);
  for (int b = 0; b < blocks; ++b) {
    for (int i = 0; i < block_size; ++i) {
      for (int j = i + 1; j < block_size; ++j) {
        const Index u = b * block_size + i, v = b * block_size + j;
        s(u, v) = s(v, u) = weight(rng);
      }
    }
  }
  return s;
}

arclust::AttributedNetwork planted_network(int c, int size, int dims, double p_in, double p_out, double spread,
                                           std::mt19937_64& rng) {
  const Index n = static_cast<Index>(c) * size;
  std::normal_distribution<double> noise(0.0, spread);
  std::uniform_real_distribution<double> centre(-1.0, 1.0);
  Matrix centres(c, dims);
  for (int k = 0; k < c; ++k) {
    for (int d = 0; d < dims; ++d) centres(k, d) = centre(rng);
  }
  Matrix attrs(n, dims);
  std::vector<int> labels(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    const int k = static_cast<int>(i / size);
    labels[static_cast<std::size_t>(i)] = k;
    for (int d = 0; d < dims; ++d) attrs(i, d) = centres(k, d) + noise(rng);
  }
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::vector<arclust::Edge> edges;
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (i == j) continue;
      const double p = labels[static_cast<std::size_t>(i)] == labels[static_cast<std::size_t>(j)] ? p_in : p_out;
      if (coin(rng) < p) edges.push_back({i, j});
    }
  }
  return arclust::AttributedNetwork(attrs, edges, labels);
}

arclust::BaseMatrixSet random_bases(Index n, Index k, std::mt19937_64& rng, double density) {
  std::uniform_real_distribution<double> weight(0.0, 1.0);
  arclust::BaseMatrixSet bases;
  for (Index q = 0; q < k; ++q) {
    Matrix m = Matrix::Zero(n, n);
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < n; ++j) {
        if (i != j && weight(rng) < density) m(i, j) = weight(rng);
      }
      if (m.row(i).sum() == 0.0) m(i, (i + 1) % n) = 1.0;
    }
    bases.matrices.push_back(arclust::row_normalize(m).matrix);
    bases.names.push_back("B" + std::to_string(q));
  }
  return bases;
}

}  // namespace fixtures
