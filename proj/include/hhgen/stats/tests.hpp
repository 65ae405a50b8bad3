#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "hhgen/stats/matrix.hpp"
#include "hhgen/stats/special.hpp"

namespace hhgen::stats {

struct TTestResult {
  double t = 0.0;
  double df = 0.0;
  double p = 1.0;
};

/// Welch's unequal-variance t-test with Welch-Satterthwaite degrees of
/// freedom and a two-sided p-value.
inline TTestResult welch_t(std::span<const double> a, std::span<const double> b) {
  require(a.size() >= 2 && b.size() >= 2, "Welch t-test needs at least two values per sample");
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  const double va = sample_variance(a) / na, vb = sample_variance(b) / nb;
  const double se2 = va + vb;
  if (se2 <= 0.0) fail(ErrorCode::degenerate_variance, "both samples have zero variance");
  TTestResult r;
  r.t = (mean(a) - mean(b)) / std::sqrt(se2);
  r.df = se2 * se2 / (va * va / (na - 1) + vb * vb / (nb - 1));
  r.p = student_t_two_sided(r.t, r.df);
  return r;
}

/// Student's pooled-variance t-test.
inline TTestResult student_t(std::span<const double> a, std::span<const double> b) {
  require(a.size() >= 2 && b.size() >= 2, "t-test needs at least two values per sample");
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  const double sp2 = ((na - 1) * sample_variance(a) + (nb - 1) * sample_variance(b)) / (na + nb - 2);
  if (sp2 <= 0.0) fail(ErrorCode::degenerate_variance, "pooled variance is zero");
  TTestResult r;
  r.t = (mean(a) - mean(b)) / std::sqrt(sp2 * (1 / na + 1 / nb));
  r.df = na + nb - 2;
  r.p = student_t_two_sided(r.t, r.df);
  return r;
}

struct AnovaResult {
  double f = 0.0;
  double df_between = 0.0;
  double df_within = 0.0;
  double p = 1.0;
};

/// One-way ANOVA: F = MS_between / MS_within.
inline AnovaResult anova_f(const std::vector<std::vector<double>>& groups) {
  require(groups.size() >= 2, "ANOVA needs at least two groups");
  double total = 0.0;
  std::size_t n = 0;
  for (const auto& g : groups) {
    require(g.size() >= 2, "ANOVA groups need at least two values");
    for (double v : g) total += v;
    n += g.size();
  }
  const double grand = total / static_cast<double>(n);
  double ssb = 0.0, ssw = 0.0;
  for (const auto& g : groups) {
    const double m = mean(g);
    ssb += static_cast<double>(g.size()) * (m - grand) * (m - grand);
    for (double v : g) ssw += (v - m) * (v - m);
  }
  AnovaResult r;
  r.df_between = static_cast<double>(groups.size() - 1);
  r.df_within = static_cast<double>(n - groups.size());
  const double msw = ssw / r.df_within;
  if (msw <= 0.0) fail(ErrorCode::degenerate_variance, "within-group variance is zero");
  r.f = (ssb / r.df_between) / msw;
  r.p = f_upper_tail(r.f, r.df_between, r.df_within);
  return r;
}

/// (mean a - mean b) / pooled SD, pooled with (n - 1) weights.
inline double cohens_d(std::span<const double> a, std::span<const double> b) {
  require(a.size() >= 2 && b.size() >= 2, "Cohen's d needs at least two values per sample");
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  const double sp2 = ((na - 1) * sample_variance(a) + (nb - 1) * sample_variance(b)) / (na + nb - 2);
  if (sp2 <= 0.0) fail(ErrorCode::degenerate_variance, "pooled standard deviation is zero");
  return (mean(a) - mean(b)) / std::sqrt(sp2);
}

}  // namespace hhgen::stats
