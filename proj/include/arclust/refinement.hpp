#pragma once

#include <vector>

#include "arclust/eigensolver.hpp"
#include "arclust/fusion.hpp"
#include "arclust/graph_model.hpp"
#include "arclust/types.hpp"

namespace arclust {

/// Graph Laplacian of W = (M + M^T)/2: D - W, or I - D^-1/2 W D^-1/2 with
/// zero-degree rows mapped to identity rows.
Matrix laplacian(const Matrix& m, LaplacianMode mode);
SparseMatrix laplacian(const SparseMatrix& m, LaplacianMode mode);

/// Indices of the `m` largest off-diagonal entries of row `i`, ties broken by
/// the smaller column index. Returned in increasing column order.
std::vector<Index> top_m_columns(const Matrix& s, Index i, Index m);

/// Keeps the top-m off-diagonal entries of every row and rescales each row to
/// sum to one. A row without positive retained entries becomes uniform over
/// its retained columns.
SparseMatrix sparsify_top_m(const Matrix& s, Index m);

struct RefinementState {
  SparseMatrix s_star;
  Vector lambda;
  /// n x c, eigenvectors of the c smallest Laplacian eigenvalues of s_star.
  Matrix embedding;
  /// The c+1 smallest eigenvalues behind `embedding` (fewer when n = c).
  Vector eigenvalues;
  double gamma = 1.0;
  int iter = 0;
  double objective = 0.0;
  bool converged = false;
};

/// Settings the refinement reads out of PipelineConfig.
struct RefinementSettings {
  int c = 2;
  double alpha = 1.0;
  double beta = 1.0;
  double gamma0 = 1.0;
  Index m = 50;
  LaplacianMode laplacian_mode = LaplacianMode::normalized;
  EigenOptions eigen;

  static RefinementSettings from(const PipelineConfig& cfg);
};

/// X for the current s_star: the c+1 smallest eigenpairs of its Laplacian.
Eigenpairs update_embedding(const SparseMatrix& s_star, const RefinementSettings& settings);

/// ||S* - S||_F^2 + alpha ||S*||_F^2 + beta ||lambda||^2 + 2 gamma tr(X^T L X)
/// with S the fused matrix for the state's lambda.
double objective(const RefinementState& state, const Matrix& fused, const RefinementSettings& settings);
double objective(const RefinementState& state, const BaseMatrixSet& bases, const RefinementSettings& settings);

/// Row-wise minimiser of ||s_i - S_i||^2 + alpha ||s_i||^2 + gamma sum_j s_ij ||x_i - x_j||^2
/// over the simplex restricted to the row's candidate columns (current
/// support plus the top-m columns of the fused row). Exact for the
/// unnormalized Laplacian. In normalized mode x_i is scaled by d_i^-1/2 with
/// degrees from the current S*, and the result is blended back towards the
/// current rows until the objective does not increase.
SparseMatrix update_rows(const RefinementState& state, const Matrix& fused, const RefinementSettings& settings);

/// <S_k, S_l>_F for every pair of base matrices.
Matrix base_gram(const BaseMatrixSet& bases);

/// Minimiser of ||S* - sum_k lambda_k S_k||_F^2 + beta ||lambda||^2 over the
/// simplex, warm-started from the state's lambda.
Vector update_weights(const RefinementState& state, const BaseMatrixSet& bases, const Matrix& gram, double beta);
Vector update_weights(const RefinementState& state, const BaseMatrixSet& bases, double beta);

/// Doubles gamma when fewer than c eigenvalues are below 1e-8, halves it when
/// more are, else keeps it.
double adapt_gamma(double gamma, const Vector& eigenvalues, int c);

inline constexpr double kZeroEigenvalue = 1e-8;
inline constexpr double kObjectiveTolerance = 1e-6;

/// Coordinate-descent driver over a fixed set of base matrices.
class Refiner {
 public:
  Refiner(BaseMatrixSet bases, RefinementSettings settings);

  const BaseMatrixSet& bases() const { return bases_; }
  const RefinementSettings& settings() const { return settings_; }
  const Matrix& gram() const { return gram_; }

  /// S*_0 = top-m sparsified fused matrix, embedding from its Laplacian,
  /// gamma = gamma0.
  RefinementState init(const Vector& lambda) const;

  /// One sweep: rows, then weights, then embedding, then gamma. Sets
  /// `converged` when the relative objective change is below 1e-6.
  void step(RefinementState& state) const;

 private:
  BaseMatrixSet bases_;
  RefinementSettings settings_;
  Matrix gram_;
};

RefinementState init_state(const Matrix& fused, const Vector& lambda, const RefinementSettings& settings);
RefinementState refine_step(RefinementState state, const BaseMatrixSet& bases, const RefinementSettings& settings);

}  // namespace arclust
