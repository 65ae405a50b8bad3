#pragma once

#include <string>
#include <vector>

#include "hhgen/stats/cosine.hpp"
#include "hhgen/stats/mutual_info.hpp"
#include "hhgen/util/csv.hpp"
#include "hhgen/util/text.hpp"

namespace hhgen::eval {

constexpr std::size_t kMinMediationSamples = 10;

struct MediationConfig {
  int n_pca = 10;
  int clusters = 0;  // 0 selects the default for the sample count
  std::uint64_t seed = 0;
  stats::KMeansOptions kmeans{300, 1e-6, 10};
};

struct MediationReport {
  double mi_pe = 0.0;
  double mi_eb = 0.0;
  double mi_pb = 0.0;
  double m_score = 0.0;
  double d_score = 0.0;
  bool validated = false;
  double strength = 0.0;
  std::size_t n = 0;
  int clusters = 0;
};

/// (M - D) / (M + D); zero when both are zero.
inline double mediation_strength(double m, double d) {
  require(m >= 0.0 && d >= 0.0, "mutual information scores are non-negative");
  return m + d > 0.0 ? (m - d) / (m + d) : 0.0;
}

inline MediationReport mediation_from_scores(double mi_pe, double mi_eb, double mi_pb) {
  MediationReport r;
  r.mi_pe = mi_pe;
  r.mi_eb = mi_eb;
  r.mi_pb = mi_pb;
  r.m_score = mi_pe + mi_eb;
  r.d_score = mi_pb;
  r.strength = mediation_strength(r.m_score, r.d_score);
  r.validated = r.m_score > r.d_score;
  return r;
}

/// Each embedding set is PCA-reduced and clustered once; the three mutual
/// informations are computed between the resulting label vectors.
inline MediationReport mediation_analysis(const stats::Matrix& p, const stats::Matrix& e, const stats::Matrix& b,
                                          const MediationConfig& cfg = {}) {
  if (p.rows() != e.rows() || e.rows() != b.rows())
    fail(ErrorCode::length_mismatch, "embedding sets differ in sample count");
  require(static_cast<std::size_t>(p.rows()) >= kMinMediationSamples, "mediation analysis needs at least 10 samples");
  const int k = cfg.clusters > 0 ? cfg.clusters : stats::default_cluster_count(p.rows());
  const auto lp = stats::discretize(p, cfg.n_pca, k, cfg.seed, cfg.kmeans);
  const auto le = stats::discretize(e, cfg.n_pca, k, cfg.seed, cfg.kmeans);
  const auto lb = stats::discretize(b, cfg.n_pca, k, cfg.seed, cfg.kmeans);
  auto r = mediation_from_scores(stats::mutual_information_discrete(lp, le), stats::mutual_information_discrete(le, lb),
                                 stats::mutual_information_discrete(lp, lb));
  r.n = static_cast<std::size_t>(p.rows());
  r.clusters = k;
  return r;
}

/// Embeddings of one controller iteration across households.
struct IterationEmbeddings {
  stats::Matrix persona;
  stats::Matrix environment;
  stats::Matrix behavior;
};

struct IterationRow {
  int iteration = 0;
  double m_score = 0.0;
  double env_behavior_cosine = 0.0;
  bool operator==(const IterationRow&) const = default;
};

/// Mediation score and mean row-wise Env-Beh cosine per iteration.
inline std::vector<IterationRow> iterative_improvement(const std::vector<IterationEmbeddings>& history,
                                                       const MediationConfig& cfg = {}) {
  require(!history.empty(), "iterative improvement needs at least one iteration");
  std::vector<IterationRow> out;
  for (std::size_t i = 0; i < history.size(); ++i) {
    const auto& h = history[i];
    if (h.environment.rows() != h.behavior.rows() || h.environment.cols() != h.behavior.cols())
      fail(ErrorCode::length_mismatch, "environment and behavior embeddings differ in shape");
    double cos = 0.0;
    for (Eigen::Index r = 0; r < h.environment.rows(); ++r) {
      const stats::Vector ev = h.environment.row(r).transpose(), bv = h.behavior.row(r).transpose();
      cos += stats::cosine(std::span<const double>(ev.data(), static_cast<std::size_t>(ev.size())),
                           std::span<const double>(bv.data(), static_cast<std::size_t>(bv.size())));
    }
    IterationRow row;
    row.iteration = static_cast<int>(i + 1);
    row.env_behavior_cosine = cos / static_cast<double>(h.environment.rows());
    row.m_score = mediation_analysis(h.persona, h.environment, h.behavior, cfg).m_score;
    out.push_back(row);
  }
  return out;
}

inline std::string iterative_csv(const std::vector<IterationRow>& rows) {
  std::vector<csv::Row> out = {{"iteration", "m_score", "env_behavior_cosine"}};
  for (const auto& r : rows) out.push_back({std::to_string(r.iteration), fmt_fixed(r.m_score, 6), fmt_fixed(r.env_behavior_cosine, 6)});
  return csv::write(out);
}

}  // namespace hhgen::eval
