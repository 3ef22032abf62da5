#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace arclust {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

enum class AttrMode { gaussian, cosine };
enum class LaplacianMode { normalized, unnormalized };
enum class NmiNormalization { arithmetic, geometric, max };

const char* to_string(AttrMode mode);
const char* to_string(LaplacianMode mode);
const char* to_string(NmiNormalization mode);

}  // namespace arclust
