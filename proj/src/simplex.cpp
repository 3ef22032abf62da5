#include "arclust/simplex.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "arclust/errors.hpp"

namespace arclust {

Vector project_to_simplex(const Vector& v) {
  const Index n = v.size();
  if (n == 0) throw Error(ErrorKind::validation, "cannot project an empty vector onto the simplex");
  std::vector<double> sorted(v.data(), v.data() + n);
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumulative = 0.0;
  double threshold = 0.0;
  for (Index k = 0; k < n; ++k) {
    cumulative += sorted[static_cast<std::size_t>(k)];
    const double t = (cumulative - 1.0) / static_cast<double>(k + 1);
    if (sorted[static_cast<std::size_t>(k)] - t > 0.0) threshold = t;
  }
  return (v.array() - threshold).cwiseMax(0.0);
}

Vector minimize_simplex_qp(const Matrix& q, const Vector& b, const Vector& start, double tol, int max_iters) {
  const Index k = b.size();
  if (k == 1) return Vector::Ones(1);
  Eigen::SelfAdjointEigenSolver<Matrix> es(q, Eigen::EigenvaluesOnly);
  const double lipschitz = 2.0 * std::max(es.eigenvalues().maxCoeff(), 1e-12);
  const double step = 1.0 / lipschitz;

  auto gradient = [&](const Vector& x) -> Vector { return 2.0 * (q * x - b); };
  auto value = [&](const Vector& x) { return x.dot(q * x) - 2.0 * b.dot(x); };

  Vector x = project_to_simplex(start);
  Vector y = x;
  double t = 1.0;
  double fx = value(x);
  for (int iter = 0; iter < max_iters; ++iter) {
    const Vector next = project_to_simplex(y - step * gradient(y));
    const double fnext = value(next);
    // Adaptive restart: an accelerated step that raises the objective is
    // replaced by a plain projected-gradient step from x.
    if (fnext > fx && t > 1.0) {
      y = x;
      t = 1.0;
      continue;
    }
    const double moved = (next - project_to_simplex(next - step * gradient(next))).norm();
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    y = next + ((t - 1.0) / t_next) * (next - x);
    x = next;
    fx = fnext;
    t = t_next;
    if (moved < tol) return x;
  }
  throw Error(ErrorKind::numerical, "simplex QP did not reach the KKT tolerance within " +
                                        std::to_string(max_iters) + " iterations");
}

}  // namespace arclust
