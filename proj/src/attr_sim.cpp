#include "arclust/attr_sim.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <string>

#include "arclust/errors.hpp"

namespace arclust {

namespace {

struct FullPca {
  Matrix scores;  // U * Sigma, all components
  Vector ratios;
};

FullPca full_pca(const Matrix& attributes) {
  if (attributes.rows() < 2) throw Error(ErrorKind::validation, "PCA needs at least two objects");
  const Matrix centered = attributes.rowwise() - attributes.colwise().mean();
  const double total = centered.squaredNorm();
  if (!(total > 0.0)) throw Error(ErrorKind::degenerate_input, "attribute matrix has zero variance");
  Eigen::BDCSVD<Matrix> svd(centered, Eigen::ComputeThinU);
  const Vector& sv = svd.singularValues();
  FullPca out;
  out.ratios = sv.array().square() / total;
  out.scores = svd.matrixU() * sv.asDiagonal();
  return out;
}

}  // namespace

PcaResult pca_reduce(const Matrix& attributes, Index dims) {
  if (dims < 1 || dims > attributes.cols()) {
    throw Error(ErrorKind::validation, "PCA dimension " + std::to_string(dims) + " outside [1, " +
                                           std::to_string(attributes.cols()) + "]");
  }
  FullPca pca = full_pca(attributes);
  // Components beyond the rank of the centred matrix carry no variance.
  const Index available = pca.ratios.size();
  PcaResult out;
  out.reduced = Matrix::Zero(attributes.rows(), dims);
  out.contribution_ratios = Vector::Zero(dims);
  const Index kept = std::min(dims, available);
  out.reduced.leftCols(kept) = pca.scores.leftCols(kept);
  out.contribution_ratios.head(kept) = pca.ratios.head(kept);
  return out;
}

PcaResult pca_reduce_auto(const Matrix& attributes, double target, Index cap) {
  FullPca pca = full_pca(attributes);
  Index dims = 0;
  double cumulative = 0.0;
  while (dims < pca.ratios.size() && dims < cap) {
    cumulative += pca.ratios(dims);
    ++dims;
    if (cumulative >= target) break;
  }
  dims = std::max<Index>(dims, 1);
  return {pca.scores.leftCols(dims), pca.ratios.head(dims)};
}

Matrix gaussian_dim_similarity(const Matrix& reduced, Index k, double sigma) {
  if (!(sigma > 0.0)) throw Error(ErrorKind::validation, "sigma must be > 0");
  const Index n = reduced.rows();
  const double scale = 1.0 / (2.0 * sigma * sigma);
  Matrix s(n, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = j + 1; i < n; ++i) {
      const double diff = reduced(i, k) - reduced(j, k);
      const double v = std::exp(-diff * diff * scale);
      s(i, j) = v;
      s(j, i) = v;
    }
    s(j, j) = 0.0;
  }
  return s;
}

Matrix cosine_similarity_matrix(const Matrix& attributes) {
  const Vector norms = attributes.rowwise().norm();
  for (Index i = 0; i < norms.size(); ++i) {
    if (!(norms(i) > 0.0)) {
      throw Error(ErrorKind::degenerate_input, "object " + std::to_string(i) + " has a zero-norm attribute vector");
    }
  }
  const Matrix unit = norms.cwiseInverse().asDiagonal() * attributes;
  Matrix s = unit * unit.transpose();
  s = (0.5 * (s + s.transpose())).cwiseMax(0.0).cwiseMin(1.0);
  s.diagonal().setZero();
  return s;
}

}  // namespace arclust
