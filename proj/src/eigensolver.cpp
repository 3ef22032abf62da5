#include "arclust/eigensolver.hpp"

#include <lapacke.h>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "arclust/errors.hpp"

namespace arclust {

namespace {

// Fixes the sign of each eigenvector so that its largest-magnitude entry is
// positive; results then do not depend on solver internals.
void canonical_signs(Matrix& vectors) {
  for (Index j = 0; j < vectors.cols(); ++j) {
    Index arg = 0;
    vectors.col(j).cwiseAbs().maxCoeff(&arg);
    if (vectors(arg, j) < 0.0) vectors.col(j) *= -1.0;
  }
}

double inf_norm(const SparseMatrix& a) {
  double best = 0.0;
  for (Index i = 0; i < a.outerSize(); ++i) {
    double row = 0.0;
    for (SparseMatrix::InnerIterator it(a, i); it; ++it) row += std::abs(it.value());
    best = std::max(best, row);
  }
  return best;
}

}  // namespace

Eigenpairs smallest_eigenpairs_dense(const Matrix& sym, Index k) {
  const Index n = sym.rows();
  if (sym.cols() != n) throw Error(ErrorKind::validation, "eigensolver needs a square matrix");
  if (k < 1 || k > n) throw Error(ErrorKind::validation, "requested " + std::to_string(k) + " eigenpairs of an order-" +
                                                             std::to_string(n) + " matrix");
  Matrix a = sym;
  Vector w(n);
  Matrix z(n, k);
  std::vector<lapack_int> support(static_cast<std::size_t>(2 * k));
  lapack_int found = 0;
  const lapack_int info = LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'V', 'I', 'L', static_cast<lapack_int>(n), a.data(),
                                         static_cast<lapack_int>(n), 0.0, 0.0, 1, static_cast<lapack_int>(k), 0.0,
                                         &found, w.data(), z.data(), static_cast<lapack_int>(n), support.data());
  if (info != 0 || found != k) {
    throw Error(ErrorKind::numerical, "dsyevr failed (info=" + std::to_string(info) + ", found " +
                                          std::to_string(found) + " of " + std::to_string(k) + " eigenpairs, n=" +
                                          std::to_string(n) + ")");
  }
  Eigenpairs out{w.head(k), std::move(z)};
  canonical_signs(out.vectors);
  return out;
}

Eigenpairs smallest_eigenpairs_lanczos(const SparseMatrix& a, Index k, double tolerance) {
  const Index n = a.rows();
  if (a.cols() != n) throw Error(ErrorKind::validation, "eigensolver needs a square matrix");
  if (k < 1 || k > n) throw Error(ErrorKind::validation, "requested " + std::to_string(k) + " eigenpairs of an order-" +
                                                             std::to_string(n) + " matrix");
  const double scale = std::max(1.0, inf_norm(a));
  const double bound = tolerance * scale;

  std::mt19937_64 rng(0x5eed1a2c2b5ULL);
  std::normal_distribution<double> normal;
  auto fresh_direction = [&](const Matrix& basis, Index used) -> Vector {
    for (int attempt = 0; attempt < 8; ++attempt) {
      Vector v(n);
      for (Index i = 0; i < n; ++i) v(i) = normal(rng);
      for (int pass = 0; pass < 2; ++pass) {
        if (used > 0) v -= basis.leftCols(used) * (basis.leftCols(used).transpose() * v);
      }
      const double norm = v.norm();
      if (norm > 1e-8) return v / norm;
    }
    throw Error(ErrorKind::numerical, "Lanczos could not extend an orthonormal basis");
  };

  // Column j of `basis` is the j-th Lanczos vector; alpha/beta build the
  // tridiagonal projection. beta_j = 0 marks a restart after breakdown.
  Index capacity = std::min(n, std::max<Index>(2 * k + 40, 100));
  Matrix basis(n, capacity);
  std::vector<double> alpha, beta;
  basis.col(0) = fresh_direction(basis, 0);
  Index steps = 0;  // Lanczos vectors with a computed alpha

  while (true) {
    while (steps < capacity) {
      const Index j = steps;
      Vector w = a * basis.col(j);
      alpha.push_back(basis.col(j).dot(w));
      ++steps;
      for (int pass = 0; pass < 2; ++pass) w -= basis.leftCols(steps) * (basis.leftCols(steps).transpose() * w);
      if (steps == n) break;
      if (basis.cols() == steps) basis.conservativeResize(Eigen::NoChange, steps + 1);
      const double bj = w.norm();
      if (bj <= 1e-10 * scale) {
        beta.push_back(0.0);
        basis.col(steps) = fresh_direction(basis, steps);
      } else {
        beta.push_back(bj);
        basis.col(steps) = w / bj;
      }
    }
    const Index m = steps;
    Matrix t = Matrix::Zero(m, m);
    for (Index j = 0; j < m; ++j) {
      t(j, j) = alpha[static_cast<std::size_t>(j)];
      if (j + 1 < m) t(j, j + 1) = t(j + 1, j) = beta[static_cast<std::size_t>(j)];
    }
    Eigen::SelfAdjointEigenSolver<Matrix> small(t);
    if (small.info() != Eigen::Success) throw Error(ErrorKind::numerical, "tridiagonal eigensolve failed");
    const Index want = std::min(k, m);
    Matrix ritz = basis.leftCols(m) * small.eigenvectors().leftCols(want);
    Vector values = small.eigenvalues().head(want);
    bool converged = want == k;
    for (Index j = 0; j < want && converged; ++j) {
      converged = (a * ritz.col(j) - values(j) * ritz.col(j)).norm() <= bound;
    }
    if (converged || m == n) {
      if (want < k) throw Error(ErrorKind::numerical, "Lanczos produced too few Ritz pairs");
      Eigenpairs out{values, std::move(ritz)};
      canonical_signs(out.vectors);
      return out;
    }
    capacity = std::min(n, 2 * capacity);
    if (basis.cols() < capacity) basis.conservativeResize(Eigen::NoChange, capacity);
  }
}

Eigenpairs smallest_eigenpairs(const SparseMatrix& sym, Index k, const EigenOptions& options) {
  const Index n = sym.rows();
  if (k < 1 || k > n) throw Error(ErrorKind::validation, "requested " + std::to_string(k) + " eigenpairs of an order-" +
                                                             std::to_string(n) + " matrix");
  if (n <= options.dense_limit) return smallest_eigenpairs_dense(Matrix(sym), k);

  // Connected blocks of the off-diagonal pattern.
  std::vector<Index> component(static_cast<std::size_t>(n), -1);
  std::vector<std::vector<Index>> members;
  std::vector<Index> stack;
  for (Index root = 0; root < n; ++root) {
    if (component[root] >= 0) continue;
    const Index id = static_cast<Index>(members.size());
    members.emplace_back();
    component[root] = id;
    stack.assign(1, root);
    while (!stack.empty()) {
      const Index u = stack.back();
      stack.pop_back();
      members[id].push_back(u);
      for (SparseMatrix::InnerIterator it(sym, u); it; ++it) {
        const Index v = it.col();
        if (v != u && it.value() != 0.0 && component[v] < 0) {
          component[v] = id;
          stack.push_back(v);
        }
      }
    }
  }
  for (auto& m : members) std::sort(m.begin(), m.end());

  struct Candidate {
    double value;
    Index block;
    Index column;
  };
  std::vector<Eigenpairs> parts;
  std::vector<Candidate> candidates;
  std::vector<Index> local(static_cast<std::size_t>(n));
  for (std::size_t b = 0; b < members.size(); ++b) {
    const auto& idx = members[b];
    const Index size = static_cast<Index>(idx.size());
    for (Index j = 0; j < size; ++j) local[idx[j]] = j;
    SparseMatrix block(size, size);
    std::vector<Eigen::Triplet<double>> triplets;
    for (Index u : idx) {
      for (SparseMatrix::InnerIterator it(sym, u); it; ++it) triplets.emplace_back(local[u], local[it.col()], it.value());
    }
    block.setFromTriplets(triplets.begin(), triplets.end());
    const Index want = std::min(k, size);
    parts.push_back(size <= options.dense_limit ? smallest_eigenpairs_dense(Matrix(block), want)
                                                : smallest_eigenpairs_lanczos(block, want, options.tolerance));
    for (Index j = 0; j < want; ++j) candidates.push_back({parts.back().values(j), static_cast<Index>(b), j});
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate& x, const Candidate& y) { return x.value < y.value; });
  Eigenpairs out{Vector(k), Matrix::Zero(n, k)};
  for (Index j = 0; j < k; ++j) {
    const Candidate& cand = candidates[static_cast<std::size_t>(j)];
    out.values(j) = cand.value;
    const auto& idx = members[static_cast<std::size_t>(cand.block)];
    const Matrix& vecs = parts[static_cast<std::size_t>(cand.block)].vectors;
    for (std::size_t r = 0; r < idx.size(); ++r) out.vectors(idx[r], j) = vecs(static_cast<Index>(r), cand.column);
  }
  return out;
}

Eigenpairs smallest_eigenpairs(const Matrix& sym, Index k, const EigenOptions& options) {
  if (sym.rows() <= options.dense_limit) return smallest_eigenpairs_dense(sym, k);
  SparseMatrix sparse = sym.sparseView();
  return smallest_eigenpairs(sparse, k, options);
}

}  // namespace arclust
