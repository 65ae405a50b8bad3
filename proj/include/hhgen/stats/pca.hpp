#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

#include "hhgen/stats/matrix.hpp"

namespace hhgen::stats {

struct PcaResult {
  Matrix components;          // features x kept, one unit component per column
  Matrix reduced;             // samples x kept
  Vector mean;                // per-feature mean removed before projection
  Vector explained_variance;  // per kept component
  int requested = 0;
  bool rank_deficient = false;  // fewer than `requested` components were kept
};

/// Principal components as the top right singular vectors of the centered
/// data. Each component is signed so its largest-magnitude loading is
/// positive (first such entry on ties). If `n` exceeds the numerical rank,
/// only the rank's worth of components is returned and the flag is set.
inline PcaResult pca_fit_transform(const Matrix& x, int n) {
  const auto rows = x.rows(), cols = x.cols();
  require(rows >= 2, "PCA needs at least two samples");
  require(n >= 1 && n <= std::min<Eigen::Index>(rows - 1, cols), "PCA requires 1 <= n <= min(rows - 1, cols)");
  require(x.allFinite(), "PCA input must be finite");

  PcaResult out;
  out.requested = n;
  out.mean = x.colwise().mean().transpose();
  const Matrix centered = x.rowwise() - out.mean.transpose();

  Eigen::BDCSVD<Matrix> svd(centered, Eigen::ComputeThinV);
  const Vector& s = svd.singularValues();
  const double tol = s.size() ? s(0) * static_cast<double>(std::max(rows, cols)) * std::numeric_limits<double>::epsilon() : 0.0;
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > tol && s(i) > 0.0) ++rank;
  const int kept = std::min(n, rank);
  out.rank_deficient = kept < n;

  out.components = svd.matrixV().leftCols(kept);
  for (int c = 0; c < kept; ++c) {
    Eigen::Index arg = 0;
    double best = -1.0;
    for (Eigen::Index r = 0; r < cols; ++r) {
      const double v = std::abs(out.components(r, c));
      if (v > best + 1e-12) {
        best = v;
        arg = r;
      }
    }
    if (out.components(arg, c) < 0) out.components.col(c) *= -1.0;
  }
  out.reduced = centered * out.components;
  out.explained_variance = s.head(kept).array().square() / static_cast<double>(rows - 1);
  return out;
}

/// PCA with `n` clamped to what the data supports; zero columns when the
/// data has no variance at all.
inline Matrix pca_reduce(const Matrix& x, int n) {
  const int cap = static_cast<int>(std::min<Eigen::Index>(x.rows() - 1, x.cols()));
  const int eff = std::min(n, cap);
  if (eff < 1) return Matrix(x.rows(), 0);
  return pca_fit_transform(x, eff).reduced;
}

}  // namespace hhgen::stats
