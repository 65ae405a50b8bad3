#pragma once

#include <cmath>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "hhgen/core/types.hpp"
#include "hhgen/stats/kmeans.hpp"
#include "hhgen/util/csv.hpp"
#include "hhgen/util/text.hpp"

namespace hhgen::eval {

/// Timing, duration and frequency of one member's activity label.
struct ActivityFeature {
  std::size_t schedule = 0;
  std::string member;
  std::string label;
  double mean_start = 0.0;
  double mean_duration = 0.0;
  double per_day = 0.0;
};

struct FeatureClustering {
  std::vector<ActivityFeature> features;
  stats::LabelVector labels;  // one per feature
  stats::Matrix centroids;    // k x 3 in minutes, minutes, occurrences/day
  double inertia = 0.0;       // in z-scored units
};

inline std::vector<ActivityFeature> activity_features(const std::vector<ActivitySchedule>& schedules) {
  std::vector<ActivityFeature> out;
  for (std::size_t s = 0; s < schedules.size(); ++s) {
    require(schedules[s].horizon_days >= 1, "schedule horizon must be at least one day");
    std::map<std::pair<std::string, std::string>, std::tuple<double, double, int>> acc;
    for (const auto& a : schedules[s].activities) {
      auto& [start, dur, count] = acc[{a.member, a.label}];
      start += a.start;
      dur += a.duration;
      ++count;
    }
    for (const auto& [key, v] : acc) {
      const auto& [start, dur, count] = v;
      out.push_back({s, key.first, key.second, start / count, dur / count,
                     static_cast<double>(count) / schedules[s].horizon_days});
    }
  }
  return out;
}

/// Features are z-scored per column (constant columns become zero), then
/// clustered; centroids are mapped back to the original units.
inline FeatureClustering activity_feature_clustering(const std::vector<ActivitySchedule>& schedules, int k,
                                                     std::uint64_t seed, const stats::KMeansOptions& opts = {300, 1e-6, 10}) {
  FeatureClustering out;
  out.features = activity_features(schedules);
  const auto n = static_cast<Eigen::Index>(out.features.size());
  require(k >= 1 && n >= k, "clustering needs at least k member-label aggregates");
  stats::Matrix x(n, 3);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& f = out.features[static_cast<std::size_t>(i)];
    x(i, 0) = f.mean_start;
    x(i, 1) = f.mean_duration;
    x(i, 2) = f.per_day;
  }
  const stats::Vector mu = x.colwise().mean().transpose();
  stats::Vector sd(3);
  for (int c = 0; c < 3; ++c) {
    const double ss = n > 1 ? (x.col(c).array() - mu(c)).square().sum() / static_cast<double>(n - 1) : 0.0;
    sd(c) = std::sqrt(ss);
  }
  stats::Matrix z(n, 3);
  for (int c = 0; c < 3; ++c)
    z.col(c) = sd(c) > 0.0 ? stats::Vector((x.col(c).array() - mu(c)) / sd(c)) : stats::Vector::Zero(n);
  const auto km = stats::kmeans(z, k, seed, opts);
  out.labels = km.labels;
  out.inertia = km.inertia;
  out.centroids = km.centroids;
  for (int c = 0; c < 3; ++c) out.centroids.col(c) = (km.centroids.col(c).array() * sd(c) + mu(c)).matrix();
  return out;
}

inline std::string clustering_csv(const FeatureClustering& r) {
  std::vector<csv::Row> rows = {{"schedule", "member", "label", "mean_start", "mean_duration", "per_day", "cluster"}};
  for (std::size_t i = 0; i < r.features.size(); ++i) {
    const auto& f = r.features[i];
    rows.push_back({std::to_string(f.schedule), f.member, f.label, fmt_fixed(f.mean_start, 3),
                    fmt_fixed(f.mean_duration, 3), fmt_fixed(f.per_day, 6), std::to_string(r.labels[i])});
  }
  return csv::write(rows);
}

}  // namespace hhgen::eval
