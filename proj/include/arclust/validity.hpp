#pragma once

#include <span>

#include "arclust/spectral.hpp"
#include "arclust/types.hpp"

namespace arclust {

struct SilhouetteReport {
  Vector per_object;
  double mean = 0.0;
};

/// Silhouette with squared Euclidean distances: a(i) is the mean distance to
/// the rest of i's cluster, b(i) the smallest mean distance to another
/// cluster. Singleton clusters and a = b = 0 give 0. Throws
/// Error(validation) when c < 2 or a cluster is empty.
SilhouetteReport silhouette(const Clustering& clustering, const Matrix& features);

enum class StopDecision { proceed, stop_at_previous };

/// Stop when the last three values have a strict local maximum in the middle.
StopDecision stopping_check(std::span<const double> history);

/// Mutual information (natural log) over a normalisation of the two
/// entropies; 0 when the normaliser is 0.
double nmi(std::span<const int> pred, std::span<const int> truth,
           NmiNormalization normalization = NmiNormalization::arithmetic);

/// Fraction of objects carrying the majority true label of their cluster.
double purity(std::span<const int> pred, std::span<const int> truth);

}  // namespace arclust
