#pragma once

#include "arclust/types.hpp"

namespace arclust {

/// Euclidean projection of `v` onto {x : x >= 0, sum(x) = 1}, by sorting
/// and thresholding. O(n log n). `v` must be non-empty.
Vector project_to_simplex(const Vector& v);

/// Minimises x^T Q x - 2 b^T x over the probability simplex for a symmetric
/// positive semidefinite Q with accelerated projected gradient. Stops once the
/// projected-gradient step is below `tol`; throws Error(numerical) if
/// `max_iters` is reached first.
Vector minimize_simplex_qp(const Matrix& q, const Vector& b, const Vector& start, double tol = 1e-8,
                           int max_iters = 200000);

}  // namespace arclust
