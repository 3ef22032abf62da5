#include "arclust/validity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "arclust/errors.hpp"

namespace arclust {

SilhouetteReport silhouette(const Clustering& clustering, const Matrix& features) {
  const Index n = features.rows();
  const int c = clustering.c;
  if (c < 2) throw Error(ErrorKind::validation, "silhouette is undefined for fewer than two clusters");
  if (clustering.size() != n) throw Error(ErrorKind::validation, "clustering and feature matrix sizes differ");

  // Mean squared distance to a cluster only needs the cluster's centroid and
  // the mean squared norm of its members.
  std::vector<Index> counts(static_cast<std::size_t>(c), 0);
  Matrix centroid = Matrix::Zero(c, features.cols());
  Vector mean_sq = Vector::Zero(c);
  const Vector sq = features.rowwise().squaredNorm();
  for (Index i = 0; i < n; ++i) {
    const int k = clustering.assignment[static_cast<std::size_t>(i)];
    if (k < 0 || k >= c) throw Error(ErrorKind::validation, "cluster id out of range");
    ++counts[static_cast<std::size_t>(k)];
    centroid.row(k) += features.row(i);
    mean_sq(k) += sq(i);
  }
  for (int k = 0; k < c; ++k) {
    const auto count = counts[static_cast<std::size_t>(k)];
    if (count == 0) throw Error(ErrorKind::validation, "silhouette needs every cluster non-empty");
    centroid.row(k) /= static_cast<double>(count);
    mean_sq(k) /= static_cast<double>(count);
  }

  SilhouetteReport report;
  report.per_object = Vector::Zero(n);
  for (Index i = 0; i < n; ++i) {
    const int own = clustering.assignment[static_cast<std::size_t>(i)];
    const auto own_count = counts[static_cast<std::size_t>(own)];
    if (own_count == 1) continue;
    auto mean_distance = [&](int k) {
      return std::max(0.0, sq(i) - 2.0 * features.row(i).dot(centroid.row(k)) + mean_sq(k));
    };
    // The distance to itself is zero, so the cluster sum only loses the divisor.
    const double a = mean_distance(own) * static_cast<double>(own_count) / static_cast<double>(own_count - 1);
    double b = std::numeric_limits<double>::infinity();
    for (int k = 0; k < c; ++k) {
      if (k != own) b = std::min(b, mean_distance(k));
    }
    const double denom = std::max(a, b);
    report.per_object(i) = denom > 0.0 ? std::clamp((b - a) / denom, -1.0, 1.0) : 0.0;
  }
  report.mean = report.per_object.mean();
  return report;
}

StopDecision stopping_check(std::span<const double> history) {
  if (history.size() < 3) return StopDecision::proceed;
  const double before = history[history.size() - 3];
  const double peak = history[history.size() - 2];
  const double after = history[history.size() - 1];
  return (before < peak && peak > after) ? StopDecision::stop_at_previous : StopDecision::proceed;
}

namespace {

struct Contingency {
  std::map<std::pair<int, int>, double> joint;
  std::map<int, double> rows;
  std::map<int, double> cols;
  double n = 0.0;
};

Contingency tabulate(std::span<const int> pred, std::span<const int> truth) {
  if (pred.size() != truth.size()) {
    throw Error(ErrorKind::validation, "prediction covers " + std::to_string(pred.size()) + " objects, truth " +
                                           std::to_string(truth.size()));
  }
  Contingency t;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    t.joint[{pred[i], truth[i]}] += 1.0;
    t.rows[pred[i]] += 1.0;
    t.cols[truth[i]] += 1.0;
  }
  t.n = static_cast<double>(pred.size());
  return t;
}

double entropy(const std::map<int, double>& marginal, double n) {
  double h = 0.0;
  for (const auto& [_, count] : marginal) {
    const double p = count / n;
    h -= p * std::log(p);
  }
  return h;
}

}  // namespace

double nmi(std::span<const int> pred, std::span<const int> truth, NmiNormalization normalization) {
  const Contingency t = tabulate(pred, truth);
  if (t.n == 0.0) return 0.0;
  double mi = 0.0;
  for (const auto& [key, count] : t.joint) {
    const double pxy = count / t.n;
    const double px = t.rows.at(key.first) / t.n;
    const double py = t.cols.at(key.second) / t.n;
    mi += pxy * std::log(pxy / (px * py));
  }
  const double hp = entropy(t.rows, t.n);
  const double ht = entropy(t.cols, t.n);
  double denom = 0.0;
  switch (normalization) {
    case NmiNormalization::arithmetic: denom = 0.5 * (hp + ht); break;
    case NmiNormalization::geometric: denom = std::sqrt(hp * ht); break;
    case NmiNormalization::max: denom = std::max(hp, ht); break;
  }
  if (denom <= 0.0) return 0.0;
  return std::clamp(mi / denom, 0.0, 1.0);
}

double purity(std::span<const int> pred, std::span<const int> truth) {
  const Contingency t = tabulate(pred, truth);
  if (t.n == 0.0) return 0.0;
  std::map<int, double> majority;
  for (const auto& [key, count] : t.joint) majority[key.first] = std::max(majority[key.first], count);
  double hits = 0.0;
  for (const auto& [_, count] : majority) hits += count;
  return hits / t.n;
}

}  // namespace arclust
