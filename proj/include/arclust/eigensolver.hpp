#pragma once

#include "arclust/types.hpp"

namespace arclust {

/// Eigenvalues in ascending order with orthonormal eigenvectors as columns.
struct Eigenpairs {
  Vector values;
  Matrix vectors;
};

struct EigenOptions {
  /// Matrices (or connected blocks) up to this order go to the dense solver.
  Index dense_limit = 3000;
  /// Residual bound ||A y - theta y|| for the Lanczos path, relative to
  /// max(1, ||A||_inf).
  double tolerance = 1e-8;
};

/// The k smallest eigenpairs of a dense symmetric matrix (LAPACK dsyevr).
Eigenpairs smallest_eigenpairs_dense(const Matrix& sym, Index k);

/// Lanczos with full reorthogonalisation. The Krylov space grows until every
/// wanted Ritz pair meets the residual bound; breakdowns restart from a fresh
/// vector orthogonal to the basis so repeated eigenvalues are found.
Eigenpairs smallest_eigenpairs_lanczos(const SparseMatrix& sym, Index k, double tolerance = 1e-8);

/// Dense solve when the order is within `dense_limit`; otherwise the matrix is
/// split into its connected blocks (off-diagonal pattern) and each block is
/// solved by the dense or Lanczos path according to its own size.
Eigenpairs smallest_eigenpairs(const SparseMatrix& sym, Index k, const EigenOptions& options = {});
Eigenpairs smallest_eigenpairs(const Matrix& sym, Index k, const EigenOptions& options = {});

}  // namespace arclust
