#pragma once

#include <utility>
#include <vector>

#include "hhgen/stats/pca.hpp"

namespace hhgen::stats {

struct DiscriminantScores {
  std::vector<double> a;
  std::vector<double> b;
  bool identical_centroids = false;  // projected on the first principal axis instead
};

namespace detail {

inline Vector discriminant_axis(const Matrix& a, const Matrix& b, bool& fallback) {
  const Vector diff = (b.colwise().mean() - a.colwise().mean()).transpose();
  const double norm = diff.norm();
  if (norm > 1e-12) {
    fallback = false;
    return diff / norm;
  }
  fallback = true;
  Matrix pooled(a.rows() + b.rows(), a.cols());
  pooled << a, b;
  if (pooled.rows() < 2) return Vector::Zero(a.cols());
  const int cap = static_cast<int>(std::min<Eigen::Index>(pooled.rows() - 1, pooled.cols()));
  if (cap < 1) return Vector::Zero(a.cols());
  auto pca = pca_fit_transform(pooled, 1);
  if (pca.components.cols() == 0) return Vector::Zero(a.cols());
  return pca.components.col(0);
}

}  // namespace detail

/// Projects both sample sets onto the unit vector from centroid(A) to
/// centroid(B). With identical centroids the first principal axis of the
/// pooled data is used instead.
inline DiscriminantScores discriminant_scores(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols()) fail(ErrorCode::length_mismatch, "discriminant inputs differ in feature count");
  require(a.rows() >= 1 && b.rows() >= 1, "discriminant needs samples on both sides");
  DiscriminantScores out;
  if (a.cols() == 0) {
    out.a.assign(static_cast<std::size_t>(a.rows()), 0.0);
    out.b.assign(static_cast<std::size_t>(b.rows()), 0.0);
    return out;
  }
  const Vector axis = detail::discriminant_axis(a, b, out.identical_centroids);
  out.a = to_std(a * axis);
  out.b = to_std(b * axis);
  return out;
}

/// Two-fold cross-fitted variant: samples with even index are scored on the
/// axis estimated from odd-index samples and vice versa, so no sample
/// influences the direction it is projected on. Falls back to the plain
/// projection when either side has fewer than two rows.
inline DiscriminantScores crossfit_discriminant_scores(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols()) fail(ErrorCode::length_mismatch, "discriminant inputs differ in feature count");
  if (a.rows() < 2 || b.rows() < 2 || a.cols() == 0) return discriminant_scores(a, b);
  auto fold = [](const Matrix& m, int parity) {
    std::vector<Eigen::Index> idx;
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (i % 2 == parity) idx.push_back(i);
    Matrix out(static_cast<Eigen::Index>(idx.size()), m.cols());
    for (std::size_t r = 0; r < idx.size(); ++r) out.row(static_cast<Eigen::Index>(r)) = m.row(idx[r]);
    return out;
  };
  DiscriminantScores out;
  out.a.assign(static_cast<std::size_t>(a.rows()), 0.0);
  out.b.assign(static_cast<std::size_t>(b.rows()), 0.0);
  for (int parity = 0; parity < 2; ++parity) {
    bool fb = false;
    const Vector axis = detail::discriminant_axis(fold(a, 1 - parity), fold(b, 1 - parity), fb);
    out.identical_centroids = out.identical_centroids || fb;
    for (Eigen::Index i = parity; i < a.rows(); i += 2) out.a[static_cast<std::size_t>(i)] = a.row(i).dot(axis);
    for (Eigen::Index i = parity; i < b.rows(); i += 2) out.b[static_cast<std::size_t>(i)] = b.row(i).dot(axis);
  }
  return out;
}

}  // namespace hhgen::stats
