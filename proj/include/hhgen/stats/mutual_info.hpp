#pragma once

#include <cmath>
#include <map>
#include <utility>

#include "hhgen/stats/kmeans.hpp"
#include "hhgen/stats/pca.hpp"

namespace hhgen::stats {

inline double entropy(const LabelVector& a) {
  require(!a.empty(), "entropy of empty label vector");
  std::map<int, std::size_t> counts;
  for (int v : a) ++counts[v];
  const double n = static_cast<double>(a.size());
  double h = 0.0;
  for (const auto& [_, c] : counts) {
    const double p = static_cast<double>(c) / n;
    h -= p * std::log(p);
  }
  return h;
}

/// Plug-in estimate of I(A; B) in nats from the empirical joint table.
inline double mutual_information_discrete(const LabelVector& a, const LabelVector& b) {
  if (a.size() != b.size()) fail(ErrorCode::length_mismatch, "label vectors differ in length");
  require(!a.empty(), "mutual information of empty label vectors");
  std::map<std::pair<int, int>, std::size_t> joint;
  std::map<int, std::size_t> ca, cb;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ++joint[{a[i], b[i]}];
    ++ca[a[i]];
    ++cb[b[i]];
  }
  const double n = static_cast<double>(a.size());
  double mi = 0.0;
  for (const auto& [key, c] : joint) {
    const double pab = static_cast<double>(c) / n;
    const double pa = static_cast<double>(ca[key.first]) / n;
    const double pb = static_cast<double>(cb[key.second]) / n;
    mi += pab * std::log(pab / (pa * pb));
  }
  return std::max(0.0, mi);
}

struct MiOptions {
  int n_pca = 10;
  int clusters = 0;  // 0 selects default_cluster_count(rows)
  KMeansOptions kmeans{300, 1e-6, 10};
};

/// Cluster labels of the PCA-reduced rows; constant data collapses to one cluster.
inline LabelVector discretize(const Matrix& x, int n_pca, int k, std::uint64_t seed, const KMeansOptions& opts) {
  const Matrix reduced = pca_reduce(x, n_pca);
  if (reduced.cols() == 0) return LabelVector(static_cast<std::size_t>(x.rows()), 0);
  const int kk = std::min<int>(k, static_cast<int>(x.rows()));
  return kmeans(reduced, kk, seed, opts).labels;
}

/// PCA -> k-means -> plug-in MI between two embedding sets over the same samples.
inline double mi_between_embeddings(const Matrix& x, const Matrix& y, int n_pca, int k, std::uint64_t seed,
                                    const KMeansOptions& opts = {300, 1e-6, 10}) {
  if (x.rows() != y.rows()) fail(ErrorCode::length_mismatch, "embedding sets differ in sample count");
  require(k >= 1, "cluster count must be positive");
  return mutual_information_discrete(discretize(x, n_pca, k, seed, opts), discretize(y, n_pca, k, seed, opts));
}

}  // namespace hhgen::stats
