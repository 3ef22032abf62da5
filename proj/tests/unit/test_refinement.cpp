#include <doctest.h>

#include <random>

#include "arclust/errors.hpp"
#include "arclust/fusion.hpp"
#include "arclust/refinement.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace arclust;
using doctest::Approx;

namespace {

RefinementSettings small_settings(int c, Index m, LaplacianMode mode) {
  RefinementSettings s;
  s.c = c;
  s.m = m;
  s.laplacian_mode = mode;
  return s;
}

bool rows_stochastic(const SparseMatrix& s, double tol = 1e-9) {
  const Matrix d(s);
  if (d.minCoeff() < -tol) return false;
  for (Index i = 0; i < d.rows(); ++i) {
    if (std::abs(d.row(i).sum() - 1.0) > tol) return false;
    if (d(i, i) != 0.0) return false;
  }
  return true;
}

// Connected components of the symmetrised support.
int component_count(const Matrix& s) {
  const Index n = s.rows();
  std::vector<int> comp(static_cast<std::size_t>(n), -1);
  int count = 0;
  for (Index start = 0; start < n; ++start) {
    if (comp[static_cast<std::size_t>(start)] >= 0) continue;
    std::vector<Index> stack{start};
    comp[static_cast<std::size_t>(start)] = count;
    while (!stack.empty()) {
      const Index u = stack.back();
      stack.pop_back();
      for (Index v = 0; v < n; ++v) {
        if ((s(u, v) > 0.0 || s(v, u) > 0.0) && comp[static_cast<std::size_t>(v)] < 0) {
          comp[static_cast<std::size_t>(v)] = count;
          stack.push_back(v);
        }
      }
    }
    ++count;
  }
  return count;
}

}  // namespace

TEST_CASE("Laplacian examples") {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  Matrix expected(2, 2);
  expected << 1, -1, -1, 1;
  CHECK((laplacian(m, LaplacianMode::unnormalized) - expected).norm() < 1e-15);
  CHECK((laplacian(m, LaplacianMode::normalized) - expected).norm() < 1e-15);

  Matrix asym(3, 3);
  asym << 0, 1, 0,
          0, 0, 1,
          0, 0, 0;
  const Matrix lu = laplacian(asym, LaplacianMode::unnormalized);
  CHECK(lu(0, 0) == Approx(0.5));
  CHECK(lu(1, 1) == Approx(1.0));
  CHECK(lu(0, 1) == Approx(-0.5));
  CHECK(lu(1, 0) == Approx(-0.5));
  CHECK(lu.rowwise().sum().cwiseAbs().maxCoeff() < 1e-15);

  Matrix isolated = Matrix::Zero(3, 3);
  isolated(0, 1) = isolated(1, 0) = 1.0;
  const Matrix ln = laplacian(isolated, LaplacianMode::normalized);
  CHECK(ln(2, 2) == 1.0);
  CHECK(ln.row(2).cwiseAbs().sum() == 1.0);

  std::mt19937_64 rng(1);
  const Matrix r = fixtures::random_bases(9, 1, rng, 0.4).matrices[0];
  for (auto mode : {LaplacianMode::normalized, LaplacianMode::unnormalized}) {
    const Matrix dense = laplacian(r, mode);
    const Matrix sparse(laplacian(SparseMatrix(r.sparseView()), mode));
    CHECK((dense - sparse).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((dense - dense.transpose()).cwiseAbs().maxCoeff() < 1e-15);
  }
}

TEST_CASE("top-m selection and sparsification") {
  Matrix s(1, 5);
  s.resize(5, 5);
  s.setZero();
  s.row(0) << 9, 0.3, 0.5, 0.3, 0.1;
  const auto cols = top_m_columns(s, 0, 2);
  REQUIRE(cols.size() == 2);
  CHECK(cols[0] == 1);
  CHECK(cols[1] == 2);
  CHECK(top_m_columns(s, 0, 10).size() == 4);

  const SparseMatrix sp = sparsify_top_m(s, 2);
  CHECK(sp.coeff(0, 1) == Approx(0.375));
  CHECK(sp.coeff(0, 2) == Approx(0.625));
  CHECK(sp.coeff(0, 0) == 0.0);
  // All-zero rows become uniform over their retained columns.
  CHECK(sp.coeff(1, 0) == Approx(0.5));
  CHECK(sp.coeff(1, 2) == Approx(0.5));
  CHECK(rows_stochastic(sp));
}

TEST_CASE("adapt gamma") {
  Vector ev(4);
  ev << 0.0, 1e-12, 0.3, 0.7;
  CHECK(adapt_gamma(1.0, ev, 2) == 1.0);
  CHECK(adapt_gamma(1.0, ev, 3) == 2.0);
  ev << 0, 0, 0, 0;
  CHECK(adapt_gamma(1.0, ev, 3) == 0.5);
  Vector none(4);
  none << 0.1, 0.2, 0.3, 0.4;
  CHECK(adapt_gamma(4.0, none, 3) == 8.0);
}

TEST_CASE("objective") {
  std::mt19937_64 rng(2);
  SUBCASE("zero at S* = S with no regularisation") {
    const auto bases = fixtures::random_bases(6, 1, rng);
    auto settings = small_settings(2, 5, LaplacianMode::unnormalized);
    settings.alpha = settings.beta = settings.gamma0 = 0.0;
    RefinementState state = init_state(bases.matrices[0], Vector::Ones(1), settings);
    CHECK(objective(state, bases, settings) == Approx(0.0).scale(1.0));
  }
  SUBCASE("matches a naive evaluation") {
    for (auto mode : {LaplacianMode::normalized, LaplacianMode::unnormalized}) {
      const auto bases = fixtures::random_bases(5, 3, rng, 0.7);
      auto settings = small_settings(2, 3, mode);
      settings.alpha = 0.7;
      settings.beta = 1.3;
      Vector lambda(3);
      lambda << 0.2, 0.5, 0.3;
      RefinementState state = init_state(fuse(bases, lambda), lambda, settings);
      state.gamma = 2.5;
      const double naive = oracle::naive_objective(Matrix(state.s_star), fuse(bases, lambda), lambda, state.embedding,
                                                   0.7, 1.3, 2.5, mode == LaplacianMode::normalized);
      CHECK(objective(state, bases, settings) == Approx(naive).epsilon(1e-12));
    }
  }
  SUBCASE("block-diagonal S* has no smoothness cost") {
    const Matrix s = fixtures::toy_two_components();
    const Matrix fused = row_normalize(s).matrix;
    auto settings = small_settings(2, 7, LaplacianMode::normalized);
    RefinementState state = init_state(fused, Vector::Ones(1), settings);
    const SparseMatrix l = laplacian(state.s_star, settings.laplacian_mode);
    CHECK(std::abs(state.embedding.cwiseProduct(l * state.embedding).sum()) < 1e-10);
  }
}

TEST_CASE("initial state") {
  const Matrix fused = row_normalize(fixtures::toy_two_components()).matrix;
  for (auto mode : {LaplacianMode::normalized, LaplacianMode::unnormalized}) {
    auto settings = small_settings(2, 7, mode);
    const auto state = init_state(fused, Vector::Ones(1), settings);
    CHECK(rows_stochastic(state.s_star));
    CHECK(state.embedding.cols() == 2);
    CHECK(state.eigenvalues.size() == 3);
    CHECK(std::abs(state.eigenvalues(1)) < 1e-10);
    CHECK(state.eigenvalues(2) > 1e-3);
    CHECK(state.gamma == 1.0);
    CHECK(state.iter == 0);
    // The two null vectors are constant on each block.
    for (Index k = 0; k < 2; ++k) {
      for (Index i = 1; i < 4; ++i) {
        if (mode == LaplacianMode::unnormalized) {
          CHECK(state.embedding(i, k) == Approx(state.embedding(0, k)).epsilon(1e-8));
          CHECK(state.embedding(4 + i, k) == Approx(state.embedding(4, k)).epsilon(1e-8));
        }
      }
    }
  }
}

TEST_CASE("embedding edge cases") {
  SUBCASE("a single cluster uses the constant vector") {
    const Matrix fused = row_normalize(fixtures::toy_bridge_weights()).matrix;
    auto settings = small_settings(1, 7, LaplacianMode::unnormalized);
    const auto state = init_state(fused, Vector::Ones(1), settings);
    REQUIRE(state.embedding.cols() == 1);
    const Vector x = state.embedding.col(0);
    CHECK(x.maxCoeff() - x.minCoeff() < 1e-8);
  }
  SUBCASE("the Fiedler vector splits a four-object path") {
    Matrix w = Matrix::Zero(4, 4);
    for (Index i = 0; i < 3; ++i) w(i, i + 1) = w(i + 1, i) = 1.0;
    auto settings = small_settings(2, 3, LaplacianMode::unnormalized);
    const auto pairs = update_embedding(w.sparseView(), settings);
    const Vector f = pairs.vectors.col(1);
    CHECK(f(0) * f(3) < 0.0);
    CHECK(f(0) * f(1) > 0.0);
    CHECK(f(2) * f(3) > 0.0);
    CHECK(pairs.values(1) == Approx(2.0 - std::sqrt(2.0)));
  }
}

TEST_CASE("row update solves each row exactly") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 8; ++trial) {
    const auto bases = fixtures::random_bases(4, 2, rng);
    Vector lambda(2);
    lambda << 0.4, 0.6;
    const Matrix fused = fuse(bases, lambda);
    auto settings = small_settings(2, 3, LaplacianMode::unnormalized);
    settings.alpha = 0.5;
    RefinementState state = init_state(fused, lambda, settings);
    state.gamma = 0.8;
    const Matrix rows(update_rows(state, fused, settings));
    const Matrix& x = state.embedding;
    for (Index i = 0; i < 4; ++i) {
      std::vector<Index> cand;
      for (Index j = 0; j < 4; ++j)
        if (j != i) cand.push_back(j);
      auto f = [&](const Eigen::VectorXd& v) {
        double total = 0.0;
        for (std::size_t c = 0; c < cand.size(); ++c) {
          const Index j = cand[c];
          const double s = v(static_cast<Index>(c));
          total += (s - fused(i, j)) * (s - fused(i, j)) + settings.alpha * s * s +
                   state.gamma * s * (x.row(i) - x.row(j)).squaredNorm();
        }
        return total;
      };
      const Eigen::VectorXd ref = oracle::grid_minimize_on_simplex(3, f);
      for (std::size_t c = 0; c < cand.size(); ++c) {
        CHECK(std::abs(rows(i, cand[c]) - ref(static_cast<Index>(c))) < 1e-3);
      }
    }
  }
}

TEST_CASE("weight update") {
  std::mt19937_64 rng(41);
  SUBCASE("one base matrix") {
    const auto bases = fixtures::random_bases(5, 1, rng);
    auto settings = small_settings(2, 4, LaplacianMode::normalized);
    const auto state = init_state(bases.matrices[0], Vector::Ones(1), settings);
    CHECK(update_weights(state, bases, 1.0)(0) == 1.0);
  }
  SUBCASE("recovers the mixing weights without regularisation") {
    const auto bases = fixtures::random_bases(6, 3, rng);
    Vector truth(3);
    truth << 0.1, 0.6, 0.3;
    RefinementState state;
    state.s_star = fuse(bases, truth).sparseView();
    state.lambda = Vector::Constant(3, 1.0 / 3.0);
    const Vector w = update_weights(state, bases, 0.0);
    CHECK((w - truth).cwiseAbs().maxCoeff() < 1e-6);
  }
  SUBCASE("two base matrices against grid search") {
    for (int trial = 0; trial < 5; ++trial) {
      const auto bases = fixtures::random_bases(5, 2, rng, 0.6);
      Vector lambda(2);
      lambda << 0.5, 0.5;
      auto settings = small_settings(2, 4, LaplacianMode::normalized);
      const auto state = init_state(fuse(bases, lambda), lambda, settings);
      const double beta = 0.3;
      const Vector w = update_weights(state, bases, beta);
      const Matrix star(state.s_star);
      auto f = [&](const Eigen::VectorXd& v) {
        return (star - v(0) * bases.matrices[0] - v(1) * bases.matrices[1]).squaredNorm() + beta * v.squaredNorm();
      };
      const Eigen::VectorXd ref = oracle::grid_minimize_on_simplex(2, f);
      CHECK((w - ref).cwiseAbs().maxCoeff() < 1e-4);
      CHECK(on_simplex(w));
    }
  }
  SUBCASE("gram matrix") {
    const auto bases = fixtures::random_bases(4, 2, rng);
    const Matrix g = base_gram(bases);
    CHECK(g(0, 1) == Approx(bases.matrices[0].cwiseProduct(bases.matrices[1]).sum()));
    CHECK(g(0, 0) == Approx(bases.matrices[0].squaredNorm()));
    CHECK(g(1, 0) == g(0, 1));
  }
}

TEST_CASE("coordinate updates never increase the objective") {
  std::mt19937_64 rng(51);
  for (int trial = 0; trial < 20; ++trial) {
    const auto bases = fixtures::random_bases(10, 3, rng, 0.5);
    auto settings = small_settings(2, 4, trial % 2 ? LaplacianMode::normalized : LaplacianMode::unnormalized);
    const Refiner refiner(bases, settings);
    RefinementState state = refiner.init(Vector::Constant(3, 1.0 / 3.0));
    for (int sweep = 0; sweep < 5; ++sweep) {
      const double before = objective(state, bases, settings);
      state.s_star = update_rows(state, fuse(bases, state.lambda), settings);
      const double after_rows = objective(state, bases, settings);
      CHECK(after_rows <= before + 1e-10 * std::max(1.0, before));
      state.lambda = update_weights(state, bases, settings.beta);
      const double after_weights = objective(state, bases, settings);
      CHECK(after_weights <= after_rows + 1e-10 * std::max(1.0, after_rows));
      const auto pairs = update_embedding(state.s_star, settings);
      state.embedding = pairs.vectors.leftCols(settings.c);
      state.eigenvalues = pairs.values;
      const double after_embedding = objective(state, bases, settings);
      CHECK(after_embedding <= after_weights + 1e-10 * std::max(1.0, after_weights));
      state.gamma = adapt_gamma(state.gamma, state.eigenvalues, settings.c);
    }
  }
}

TEST_CASE("invariants hold after every step") {
  std::mt19937_64 rng(61);
  for (auto mode : {LaplacianMode::normalized, LaplacianMode::unnormalized}) {
    const auto bases = fixtures::random_bases(12, 4, rng, 0.5);
    auto settings = small_settings(3, 5, mode);
    const Refiner refiner(bases, settings);
    RefinementState state = refiner.init(Vector::Constant(4, 0.25));
    for (int step = 0; step < 6; ++step) {
      refiner.step(state);
      CHECK(state.iter == step + 1);
      CHECK(rows_stochastic(state.s_star));
      CHECK(on_simplex(state.lambda));
      CHECK(state.embedding.cols() == 3);
      CHECK(std::isfinite(state.objective));
      for (Index i = 0; i < 12; ++i) CHECK(state.s_star.row(i).nonZeros() <= 12);
    }
  }
}

TEST_CASE("a fixed point is flagged as converged") {
  const Matrix fused = row_normalize(fixtures::toy_two_components()).matrix;
  BaseMatrixSet bases;
  bases.matrices = {fused};
  bases.names = {"S"};
  auto settings = small_settings(2, 7, LaplacianMode::unnormalized);
  const Refiner refiner(bases, settings);
  RefinementState state = refiner.init(Vector::Ones(1));
  for (int i = 0; i < 60 && !state.converged; ++i) refiner.step(state);
  CHECK(state.converged);
  const double settled = state.objective;
  refiner.step(state);
  CHECK(state.converged);
  CHECK(std::abs(state.objective - settled) / std::max(1.0, settled) < kObjectiveTolerance);
}

TEST_CASE("refinement cuts the bridge of the toy network") {
  BaseMatrixSet bases;
  bases.matrices = {row_normalize(fixtures::toy_bridge_weights()).matrix};
  bases.names = {"S"};
  for (auto mode : {LaplacianMode::unnormalized, LaplacianMode::normalized}) {
    auto settings = small_settings(2, 7, mode);
    const Refiner refiner(bases, settings);
    RefinementState state = refiner.init(Vector::Ones(1));
    CHECK(component_count(Matrix(state.s_star)) == 1);
    for (int i = 0; i < 50 && !state.converged; ++i) refiner.step(state);
    const Matrix s(state.s_star);
    CHECK(s(3, 4) == 0.0);
    CHECK(s(4, 3) == 0.0);
    CHECK(component_count(s) == 2);
    CHECK((state.eigenvalues.array() < kZeroEigenvalue).count() == 2);
  }
}

TEST_CASE("settings from a pipeline configuration") {
  PipelineConfig cfg;
  cfg.c = 4;
  cfg.alpha = 0.3;
  cfg.dense_eigen_limit = 100;
  auto s = RefinementSettings::from(cfg);
  CHECK(s.c == 4);
  CHECK(s.alpha == 0.3);
  CHECK(s.m == 50);
  CHECK(s.eigen.dense_limit == 100);
  cfg.c = 70;
  CHECK(RefinementSettings::from(cfg).m == 70);
  cfg.m = 80;
  CHECK(RefinementSettings::from(cfg).m == 80);
}
