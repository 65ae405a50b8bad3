#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <span>
#include <vector>

#include "hhgen/error.hpp"

namespace hhgen::stats {

/// Samples in rows, features in columns.
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
/// Cluster label per sample, each in [0, k).
using LabelVector = std::vector<int>;

inline Matrix from_rows(const std::vector<std::vector<double>>& rows) {
  require(!rows.empty(), "matrix needs at least one row");
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    require(rows[i].size() == rows.front().size(), "ragged matrix rows");
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  }
  return m;
}

inline bool all_finite(const Matrix& m) { return m.allFinite(); }

inline double mean(std::span<const double> v) {
  require(!v.empty(), "mean of empty sample");
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

/// Unbiased (n - 1) sample variance.
inline double sample_variance(std::span<const double> v) {
  require(v.size() >= 2, "variance needs at least two values");
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

inline std::vector<double> to_std(const Vector& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace hhgen::stats
