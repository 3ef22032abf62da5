#include "arclust/refinement.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "arclust/errors.hpp"
#include "arclust/simplex.hpp"

namespace arclust {

Matrix laplacian(const Matrix& m, LaplacianMode mode) {
  const Matrix w = 0.5 * (m + m.transpose());
  const Vector degree = w.rowwise().sum();
  if (mode == LaplacianMode::unnormalized) {
    Matrix l = -w;
    l.diagonal() += degree;
    return l;
  }
  const Index n = w.rows();
  Vector inv_sqrt(n);
  for (Index i = 0; i < n; ++i) inv_sqrt(i) = degree(i) > 0.0 ? 1.0 / std::sqrt(degree(i)) : 0.0;
  Matrix l = -(inv_sqrt.asDiagonal() * w * inv_sqrt.asDiagonal());
  l.diagonal().array() += 1.0;
  return l;
}

SparseMatrix laplacian(const SparseMatrix& m, LaplacianMode mode) {
  const Index n = m.rows();
  SparseMatrix w = SparseMatrix(m.transpose());
  w = 0.5 * (w + m);
  Vector degree = Vector::Zero(n);
  for (Index i = 0; i < n; ++i) {
    for (SparseMatrix::InnerIterator it(w, i); it; ++it) degree(i) += it.value();
  }
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(w.nonZeros() + n));
  if (mode == LaplacianMode::unnormalized) {
    for (Index i = 0; i < n; ++i) {
      triplets.emplace_back(i, i, degree(i));
      for (SparseMatrix::InnerIterator it(w, i); it; ++it) triplets.emplace_back(i, it.col(), -it.value());
    }
  } else {
    Vector inv_sqrt(n);
    for (Index i = 0; i < n; ++i) inv_sqrt(i) = degree(i) > 0.0 ? 1.0 / std::sqrt(degree(i)) : 0.0;
    for (Index i = 0; i < n; ++i) {
      triplets.emplace_back(i, i, 1.0);
      for (SparseMatrix::InnerIterator it(w, i); it; ++it) {
        triplets.emplace_back(i, it.col(), -it.value() * inv_sqrt(i) * inv_sqrt(it.col()));
      }
    }
  }
  SparseMatrix l(n, n);
  l.setFromTriplets(triplets.begin(), triplets.end());
  return l;
}

std::vector<Index> top_m_columns(const Matrix& s, Index i, Index m) {
  const Index n = s.cols();
  std::vector<Index> cols;
  cols.reserve(static_cast<std::size_t>(n));
  for (Index j = 0; j < n; ++j) {
    if (j != i) cols.push_back(j);
  }
  const auto keep = static_cast<std::ptrdiff_t>(std::min<Index>(m, static_cast<Index>(cols.size())));
  std::partial_sort(cols.begin(), cols.begin() + keep, cols.end(), [&](Index a, Index b) {
    const double va = s(i, a), vb = s(i, b);
    return va != vb ? va > vb : a < b;
  });
  cols.resize(static_cast<std::size_t>(keep));
  std::sort(cols.begin(), cols.end());
  return cols;
}

SparseMatrix sparsify_top_m(const Matrix& s, Index m) {
  const Index n = s.rows();
  std::vector<Eigen::Triplet<double>> triplets;
  for (Index i = 0; i < n; ++i) {
    const auto cols = top_m_columns(s, i, m);
    double sum = 0.0;
    for (Index j : cols) sum += std::max(0.0, s(i, j));
    for (Index j : cols) {
      const double v = sum > 0.0 ? std::max(0.0, s(i, j)) / sum : 1.0 / static_cast<double>(cols.size());
      if (v > 0.0) triplets.emplace_back(i, j, v);
    }
  }
  SparseMatrix out(n, n);
  out.setFromTriplets(triplets.begin(), triplets.end());
  return out;
}

RefinementSettings RefinementSettings::from(const PipelineConfig& cfg) {
  RefinementSettings s;
  s.c = cfg.c;
  s.alpha = cfg.alpha;
  s.beta = cfg.beta;
  s.gamma0 = cfg.gamma0;
  s.m = cfg.m.value_or(std::max(cfg.c, 50));
  s.laplacian_mode = cfg.laplacian_mode;
  s.eigen.dense_limit = cfg.dense_eigen_limit;
  return s;
}

Eigenpairs update_embedding(const SparseMatrix& s_star, const RefinementSettings& settings) {
  const Index k = std::min<Index>(settings.c + 1, s_star.rows());
  return smallest_eigenpairs(laplacian(s_star, settings.laplacian_mode), k, settings.eigen);
}

double objective(const RefinementState& state, const Matrix& fused, const RefinementSettings& settings) {
  const SparseMatrix& s = state.s_star;
  double cross = 0.0;
  double star_sq = 0.0;
  for (Index i = 0; i < s.outerSize(); ++i) {
    for (SparseMatrix::InnerIterator it(s, i); it; ++it) {
      cross += it.value() * fused(i, it.col());
      star_sq += it.value() * it.value();
    }
  }
  const double fit = fused.squaredNorm() - 2.0 * cross + star_sq;
  const SparseMatrix l = laplacian(s, settings.laplacian_mode);
  const Matrix& x = state.embedding;
  const double trace = x.cwiseProduct(l * x).sum();
  return fit + settings.alpha * star_sq + settings.beta * state.lambda.squaredNorm() + 2.0 * state.gamma * trace;
}

double objective(const RefinementState& state, const BaseMatrixSet& bases, const RefinementSettings& settings) {
  return objective(state, fuse(bases, state.lambda), settings);
}

SparseMatrix update_rows(const RefinementState& state, const Matrix& fused, const RefinementSettings& settings) {
  const SparseMatrix& current = state.s_star;
  const Index n = fused.rows();
  // Normalized mode measures distances between degree-scaled embedding rows,
  // with degrees taken from the current S*.
  Matrix x = state.embedding;
  if (settings.laplacian_mode == LaplacianMode::normalized && current.nonZeros() > 0) {
    Vector degree = 0.5 * Vector(current * Vector::Ones(n));
    degree += 0.5 * Vector(current.transpose() * Vector::Ones(n));
    for (Index i = 0; i < n; ++i) x.row(i) *= degree(i) > 0.0 ? 1.0 / std::sqrt(degree(i)) : 0.0;
  }
  const double half_gamma = 0.5 * state.gamma;
  const double shrink = 1.0 / (1.0 + settings.alpha);
  std::vector<Eigen::Triplet<double>> triplets;
  std::vector<Index> candidates;
  for (Index i = 0; i < n; ++i) {
    candidates = top_m_columns(fused, i, settings.m);
    for (SparseMatrix::InnerIterator it(current, i); it; ++it) candidates.push_back(it.col());
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    if (candidates.empty()) continue;
    Vector target(static_cast<Index>(candidates.size()));
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      const Index j = candidates[c];
      const double dist = (x.row(i) - x.row(j)).squaredNorm();
      target(static_cast<Index>(c)) = (fused(i, j) - half_gamma * dist) * shrink;
    }
    const Vector row = project_to_simplex(target);
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      if (row(static_cast<Index>(c)) > 0.0) triplets.emplace_back(i, candidates[c], row(static_cast<Index>(c)));
    }
  }
  SparseMatrix out(n, n);
  out.setFromTriplets(triplets.begin(), triplets.end());
  if (settings.laplacian_mode == LaplacianMode::unnormalized || current.nonZeros() == 0) return out;

  // The normalized trace is not linear in S* (the degrees move), so the rows
  // above are only a proposal. Backtrack towards the current rows until the
  // objective does not increase.
  const double before = objective(state, fused, settings);
  RefinementState trial = state;
  for (int halving = 0; halving < 30; ++halving) {
    const double t = std::ldexp(1.0, -halving);
    trial.s_star = halving == 0 ? out : SparseMatrix(t * out + (1.0 - t) * current);
    trial.s_star.prune(0.0);
    if (objective(trial, fused, settings) <= before) return trial.s_star;
  }
  return current;
}

Matrix base_gram(const BaseMatrixSet& bases) {
  const Index k = bases.count();
  Matrix g(k, k);
  for (Index a = 0; a < k; ++a) {
    for (Index b = a; b < k; ++b) {
      const double v = bases.matrices[static_cast<std::size_t>(a)].cwiseProduct(bases.matrices[static_cast<std::size_t>(b)]).sum();
      g(a, b) = v;
      g(b, a) = v;
    }
  }
  return g;
}

Vector update_weights(const RefinementState& state, const BaseMatrixSet& bases, const Matrix& gram, double beta) {
  const Index k = bases.count();
  if (k == 1) return Vector::Ones(1);
  Vector b = Vector::Zero(k);
  const SparseMatrix& s = state.s_star;
  for (Index i = 0; i < s.outerSize(); ++i) {
    for (SparseMatrix::InnerIterator it(s, i); it; ++it) {
      for (Index q = 0; q < k; ++q) b(q) += it.value() * bases.matrices[static_cast<std::size_t>(q)](i, it.col());
    }
  }
  Matrix q = gram;
  q.diagonal().array() += beta;
  return minimize_simplex_qp(q, b, state.lambda);
}

Vector update_weights(const RefinementState& state, const BaseMatrixSet& bases, double beta) {
  return update_weights(state, bases, base_gram(bases), beta);
}

double adapt_gamma(double gamma, const Vector& eigenvalues, int c) {
  const auto zeros = (eigenvalues.array() < kZeroEigenvalue).count();
  if (zeros < c) return 2.0 * gamma;
  if (zeros > c) return 0.5 * gamma;
  return gamma;
}

namespace {

void set_embedding(RefinementState& state, const Eigenpairs& pairs, int c) {
  const Index cols = std::min<Index>(c, pairs.vectors.cols());
  state.embedding = pairs.vectors.leftCols(cols);
  state.eigenvalues = pairs.values;
}

}  // namespace

Refiner::Refiner(BaseMatrixSet bases, RefinementSettings settings)
    : bases_(std::move(bases)), settings_(settings), gram_(base_gram(bases_)) {}

RefinementState Refiner::init(const Vector& lambda) const {
  return init_state(fuse(bases_, lambda), lambda, settings_);
}

void Refiner::step(RefinementState& state) const {
  const Matrix fused = fuse(bases_, state.lambda);
  state.s_star = update_rows(state, fused, settings_);
  state.lambda = update_weights(state, bases_, gram_, settings_.beta);
  set_embedding(state, update_embedding(state.s_star, settings_), settings_.c);
  state.gamma = adapt_gamma(state.gamma, state.eigenvalues, settings_.c);
  const double previous = state.objective;
  state.objective = objective(state, fuse(bases_, state.lambda), settings_);
  if (!std::isfinite(state.objective)) throw Error(ErrorKind::numerical, "refinement objective became non-finite");
  state.converged = std::abs(state.objective - previous) / std::max(1.0, state.objective) < kObjectiveTolerance;
  ++state.iter;
}

RefinementState init_state(const Matrix& fused, const Vector& lambda, const RefinementSettings& settings) {
  RefinementState state;
  state.s_star = sparsify_top_m(fused, settings.m);
  state.lambda = lambda;
  state.gamma = settings.gamma0;
  set_embedding(state, update_embedding(state.s_star, settings), settings.c);
  state.objective = objective(state, fused, settings);
  return state;
}

RefinementState refine_step(RefinementState state, const BaseMatrixSet& bases, const RefinementSettings& settings) {
  Refiner(bases, settings).step(state);
  return state;
}

}  // namespace arclust
