#pragma once

#include <string>
#include <vector>

#include "arclust/types.hpp"

namespace arclust {

struct RowNormalized {
  Matrix matrix;
  /// Rows with no positive entry, left as zero.
  std::vector<Index> zero_rows;
};

RowNormalized row_normalize(const Matrix& m);

/// The K row-normalised base matrices in fusion order: attribute matrices
/// first, then the front-relative and front-max relational matrices.
struct BaseMatrixSet {
  std::vector<Matrix> matrices;
  std::vector<std::string> names;

  Index count() const { return static_cast<Index>(matrices.size()); }
  Index size() const { return matrices.empty() ? 0 : matrices.front().rows(); }
};

/// Half the weight spread over the attribute matrices in proportion to the
/// PCA contribution ratios, a quarter on each relational matrix. In cosine
/// mode pass a single ratio; the attribute matrix then gets the full 0.5.
Vector init_weights(const Vector& contribution_ratios, Index matrix_count);

/// Sum_k lambda_k S_k. Throws Error(validation) on a size mismatch.
Matrix fuse(const BaseMatrixSet& bases, const Vector& lambda);

/// True when every entry is >= -tol and the entries sum to 1 within tol.
bool on_simplex(const Vector& v, double tol = 1e-9);

}  // namespace arclust
