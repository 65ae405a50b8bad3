#pragma once

#include <limits>
#include <vector>

#include "hhgen/stats/matrix.hpp"
#include "hhgen/util/rng.hpp"

namespace hhgen::stats {

struct KMeansOptions {
  int max_iter = 300;
  double tol = 1e-6;  // stop when no centroid moves farther than this
  int n_init = 1;     // independent k-means++ restarts, best inertia kept
};

struct KMeansResult {
  LabelVector labels;
  Matrix centroids;  // k x features
  double inertia = 0.0;
  int iterations = 0;
  std::vector<double> inertia_history;  // objective after each assignment step
};

namespace detail {

inline double sq_dist(const Matrix& x, Eigen::Index i, const Matrix& c, Eigen::Index j) {
  return (x.row(i) - c.row(j)).squaredNorm();
}

/// Nearest centroid, lowest index on ties.
inline std::pair<int, double> nearest(const Matrix& x, Eigen::Index i, const Matrix& c) {
  int best = 0;
  double bd = sq_dist(x, i, c, 0);
  for (Eigen::Index j = 1; j < c.rows(); ++j) {
    const double d = sq_dist(x, i, c, j);
    if (d < bd) {
      bd = d;
      best = static_cast<int>(j);
    }
  }
  return {best, bd};
}

inline Matrix kmeanspp_init(const Matrix& x, int k, Rng& rng) {
  const auto n = x.rows();
  Matrix c(k, x.cols());
  std::vector<bool> chosen(static_cast<std::size_t>(n), false);
  auto first = static_cast<Eigen::Index>(rng.index(static_cast<std::size_t>(n)));
  c.row(0) = x.row(first);
  chosen[static_cast<std::size_t>(first)] = true;
  std::vector<double> d2(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) d2[static_cast<std::size_t>(i)] = sq_dist(x, i, c, 0);
  for (int m = 1; m < k; ++m) {
    double total = 0.0;
    for (double v : d2) total += v;
    Eigen::Index pick = -1;
    if (total > 0.0) {
      double r = rng.uniform() * total;
      for (Eigen::Index i = 0; i < n; ++i) {
        r -= d2[static_cast<std::size_t>(i)];
        if (r < 0.0 && d2[static_cast<std::size_t>(i)] > 0.0) {
          pick = i;
          break;
        }
      }
      if (pick < 0) {
        for (Eigen::Index i = n - 1; i >= 0; --i)
          if (d2[static_cast<std::size_t>(i)] > 0.0) { pick = i; break; }
      }
    } else {
      for (Eigen::Index i = 0; i < n; ++i)
        if (!chosen[static_cast<std::size_t>(i)]) { pick = i; break; }
    }
    c.row(m) = x.row(pick);
    chosen[static_cast<std::size_t>(pick)] = true;
    for (Eigen::Index i = 0; i < n; ++i)
      d2[static_cast<std::size_t>(i)] = std::min(d2[static_cast<std::size_t>(i)], sq_dist(x, i, c, m));
  }
  return c;
}

inline KMeansResult lloyd(const Matrix& x, Matrix centroids, const KMeansOptions& opts) {
  const auto n = x.rows();
  const auto k = centroids.rows();
  KMeansResult res;
  res.labels.assign(static_cast<std::size_t>(n), 0);
  std::vector<double> dist(static_cast<std::size_t>(n));

  auto assign = [&] {
    double j = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      auto [lab, d] = nearest(x, i, centroids);
      res.labels[static_cast<std::size_t>(i)] = lab;
      dist[static_cast<std::size_t>(i)] = d;
      j += d;
    }
    res.inertia_history.push_back(j);
    return j;
  };

  for (int it = 0; it < opts.max_iter; ++it) {
    assign();
    res.iterations = it + 1;
    Matrix next = Matrix::Zero(k, x.cols());
    std::vector<int> counts(static_cast<std::size_t>(k), 0);
    for (Eigen::Index i = 0; i < n; ++i) {
      next.row(res.labels[static_cast<std::size_t>(i)]) += x.row(i);
      ++counts[static_cast<std::size_t>(res.labels[static_cast<std::size_t>(i)])];
    }
    std::vector<bool> donor(static_cast<std::size_t>(n), false);
    for (Eigen::Index j = 0; j < k; ++j) {
      if (counts[static_cast<std::size_t>(j)] > 0) {
        next.row(j) /= counts[static_cast<std::size_t>(j)];
        continue;
      }
      // Empty cluster: move it onto the point farthest from its centroid.
      Eigen::Index far = 0;
      double fd = -1.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (!donor[static_cast<std::size_t>(i)] && dist[static_cast<std::size_t>(i)] > fd) {
          fd = dist[static_cast<std::size_t>(i)];
          far = i;
        }
      }
      donor[static_cast<std::size_t>(far)] = true;
      next.row(j) = x.row(far);
    }
    double shift = 0.0;
    for (Eigen::Index j = 0; j < k; ++j) shift = std::max(shift, (next.row(j) - centroids.row(j)).norm());
    centroids = std::move(next);
    if (shift < opts.tol) break;
  }
  res.inertia = assign();
  res.centroids = std::move(centroids);
  return res;
}

}  // namespace detail

/// Lloyd's algorithm from a seeded k-means++ start. Ties go to the lowest
/// centroid index; an emptied cluster is re-seeded at the farthest point.
inline KMeansResult kmeans(const Matrix& x, int k, std::uint64_t seed, const KMeansOptions& opts = {}) {
  require(x.rows() >= 1, "k-means needs at least one sample");
  require(k >= 1 && k <= x.rows(), "k-means requires 1 <= k <= rows");
  require(opts.n_init >= 1, "k-means needs n_init >= 1");
  KMeansResult best;
  for (int r = 0; r < opts.n_init; ++r) {
    Rng rng(seed + static_cast<std::uint64_t>(r));
    auto res = detail::lloyd(x, detail::kmeanspp_init(x, k, rng), opts);
    if (r == 0 || res.inertia < best.inertia) best = std::move(res);
  }
  return best;
}

/// Default cluster count for the MI pipeline: min(20, floor(n / 10)), at least 1.
inline int default_cluster_count(Eigen::Index samples) {
  return static_cast<int>(std::max<Eigen::Index>(1, std::min<Eigen::Index>(20, samples / 10)));
}

}  // namespace hhgen::stats
