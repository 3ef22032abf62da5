#include "arclust/fusion.hpp"

#include <cmath>

#include "arclust/errors.hpp"

namespace arclust {

RowNormalized row_normalize(const Matrix& m) {
  RowNormalized out{m, {}};
  for (Index i = 0; i < m.rows(); ++i) {
    const double sum = m.row(i).sum();
    if (sum > 0.0) {
      out.matrix.row(i) /= sum;
    } else {
      out.matrix.row(i).setZero();
      out.zero_rows.push_back(i);
    }
  }
  return out;
}

Vector init_weights(const Vector& contribution_ratios, Index matrix_count) {
  const Index d = contribution_ratios.size();
  if (d < 1 || matrix_count != d + 2) {
    throw Error(ErrorKind::validation, "weight count " + std::to_string(matrix_count) +
                                           " does not match attribute matrix count + 2");
  }
  const double total = contribution_ratios.sum();
  Vector lambda(matrix_count);
  if (total > 0.0) {
    lambda.head(d) = 0.5 * contribution_ratios / total;
  } else {
    lambda.head(d).setConstant(0.5 / static_cast<double>(d));
  }
  lambda(d) = 0.25;
  lambda(d + 1) = 0.25;
  return lambda;
}

Matrix fuse(const BaseMatrixSet& bases, const Vector& lambda) {
  if (bases.count() == 0) throw Error(ErrorKind::validation, "no base matrices to fuse");
  if (lambda.size() != bases.count()) {
    throw Error(ErrorKind::validation, "weight vector has " + std::to_string(lambda.size()) + " entries for " +
                                           std::to_string(bases.count()) + " base matrices");
  }
  Matrix s = Matrix::Zero(bases.size(), bases.size());
  for (Index k = 0; k < bases.count(); ++k) {
    const Matrix& base = bases.matrices[static_cast<std::size_t>(k)];
    if (base.rows() != s.rows() || base.cols() != s.cols()) {
      throw Error(ErrorKind::validation, "base matrix " + std::to_string(k) + " has mismatched dimensions");
    }
    if (lambda(k) != 0.0) s.noalias() += lambda(k) * base;
  }
  return s;
}

bool on_simplex(const Vector& v, double tol) {
  return v.size() > 0 && v.minCoeff() >= -tol && std::abs(v.sum() - 1.0) <= tol;
}

}  // namespace arclust
