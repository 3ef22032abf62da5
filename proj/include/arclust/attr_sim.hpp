#pragma once

#include "arclust/types.hpp"

namespace arclust {

struct PcaResult {
  /// n x d' projections onto the leading principal components.
  Matrix reduced;
  /// Share of the total variance carried by each retained component,
  /// non-increasing.
  Vector contribution_ratios;
};

/// PCA on the mean-centred attribute matrix (no variance scaling), keeping
/// `dims` components. Throws Error(degenerate_input) when every column is
/// constant and Error(validation) when dims is outside [1, d] or n < 2.
PcaResult pca_reduce(const Matrix& attributes, Index dims);

/// Same as pca_reduce with the smallest dimension count whose cumulative
/// contribution reaches `target`, capped at `cap`.
PcaResult pca_reduce_auto(const Matrix& attributes, double target = 0.8, Index cap = 30);

/// exp(-(a_ik - a_jk)^2 / (2 sigma^2)) off the diagonal, 0 on it.
Matrix gaussian_dim_similarity(const Matrix& reduced, Index k, double sigma);

/// Cosine similarity clamped at 0, zero diagonal. Throws
/// Error(degenerate_input) naming the first zero-norm row.
Matrix cosine_similarity_matrix(const Matrix& attributes);

}  // namespace arclust
