#pragma once

// Independent reference implementations used only by the tests. None of
// these share code with the library under test.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

namespace oracle {

using Mat = std::vector<std::vector<double>>;

/// Cyclic Jacobi eigen-decomposition of a symmetric matrix. Returns
/// eigenvalues (descending) and eigenvectors as columns of `vecs`.
inline void jacobi_eigen(Mat a, std::vector<double>& vals, Mat& vecs) {
  const std::size_t n = a.size();
  vecs.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) vecs[i][i] = 1.0;
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(a[p][q]) < 1e-300) continue;
        const double theta = (a[q][q] - a[p][p]) / (2 * a[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1));
        const double c = 1 / std::sqrt(t * t + 1), s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = vecs[k][p], vkq = vecs[k][q];
          vecs[k][p] = c * vkp - s * vkq;
          vecs[k][q] = s * vkp + c * vkq;
        }
      }
    }
  }
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return a[x][x] > a[y][y]; });
  Mat sorted(n, std::vector<double>(n));
  vals.assign(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    vals[j] = a[order[j]][order[j]];
    for (std::size_t i = 0; i < n; ++i) sorted[i][j] = vecs[i][order[j]];
  }
  vecs = sorted;
}

/// Sample covariance (n - 1) of row-major data.
inline Mat covariance(const Mat& x) {
  const std::size_t n = x.size(), d = x[0].size();
  std::vector<double> mu(d, 0.0);
  for (const auto& r : x)
    for (std::size_t j = 0; j < d; ++j) mu[j] += r[j] / static_cast<double>(n);
  Mat c(d, std::vector<double>(d, 0.0));
  for (const auto& r : x)
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) c[i][j] += (r[i] - mu[i]) * (r[j] - mu[j]) / static_cast<double>(n - 1);
  return c;
}

/// Minimum within-cluster sum of squares over every partition of the rows
/// into exactly k non-empty groups.
inline double best_partition_inertia(const Mat& x, int k, std::vector<int>* best_labels = nullptr) {
  const std::size_t n = x.size(), d = x[0].size();
  std::vector<int> lab(n, 0);
  double best = std::numeric_limits<double>::infinity();
  std::function<void(std::size_t, int)> rec = [&](std::size_t i, int used) {
    if (i == n) {
      if (used != k) return;
      double total = 0.0;
      for (int c = 0; c < k; ++c) {
        std::vector<double> mu(d, 0.0);
        int cnt = 0;
        for (std::size_t r = 0; r < n; ++r)
          if (lab[r] == c) {
            ++cnt;
            for (std::size_t j = 0; j < d; ++j) mu[j] += x[r][j];
          }
        for (auto& m : mu) m /= cnt;
        for (std::size_t r = 0; r < n; ++r)
          if (lab[r] == c)
            for (std::size_t j = 0; j < d; ++j) total += (x[r][j] - mu[j]) * (x[r][j] - mu[j]);
      }
      if (total < best) {
        best = total;
        if (best_labels) *best_labels = lab;
      }
      return;
    }
    // Canonical labelling: a point may open at most one new cluster.
    for (int c = 0; c < std::min(used + 1, k); ++c) {
      lab[i] = c;
      rec(i + 1, std::max(used, c + 1));
    }
  };
  rec(0, 0);
  return best;
}

/// True when two labelings induce the same partition.
inline bool same_partition(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j)
      if ((a[i] == a[j]) != (b[i] == b[j])) return false;
  return true;
}

/// Plug-in MI in nats straight from a contingency table of counts.
inline double mi_from_counts(const Mat& counts) {
  double n = 0.0;
  for (const auto& r : counts)
    for (double c : r) n += c;
  std::vector<double> rs(counts.size(), 0.0), cs(counts[0].size(), 0.0);
  for (std::size_t i = 0; i < counts.size(); ++i)
    for (std::size_t j = 0; j < counts[i].size(); ++j) {
      rs[i] += counts[i][j];
      cs[j] += counts[i][j];
    }
  double mi = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i)
    for (std::size_t j = 0; j < counts[i].size(); ++j)
      if (counts[i][j] > 0) mi += counts[i][j] / n * std::log(counts[i][j] * n / (rs[i] * cs[j]));
  return mi;
}

}  // namespace oracle
