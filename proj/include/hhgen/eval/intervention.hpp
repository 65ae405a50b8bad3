#pragma once

#include <functional>
#include <future>
#include <string>
#include <vector>

#include "hhgen/core/types.hpp"
#include "hhgen/stats/discriminant.hpp"
#include "hhgen/stats/pca.hpp"
#include "hhgen/stats/tests.hpp"
#include "hhgen/util/csv.hpp"
#include "hhgen/util/rng.hpp"
#include "hhgen/util/text.hpp"

namespace hhgen::eval {

struct InterventionCell {
  std::string attribute;  // "age", "org" or "sleep"
  std::string value;
  bool operator==(const InterventionCell&) const = default;
};

inline std::vector<InterventionCell> default_interventions() {
  return {{"age", "16"}, {"age", "65"}, {"org", "messy"}, {"org", "organized"}, {"sleep", "early"}, {"sleep", "late"}};
}

/// Household with the attribute changed on its first member.
inline std::vector<Persona> modify_attribute(std::vector<Persona> household, const InterventionCell& cell) {
  require(!household.empty(), "intervention needs a non-empty household");
  auto& p = household.front();
  if (cell.attribute == "age") {
    try {
      p.age = std::stoi(cell.value);
    } catch (const std::exception&) {
      fail(ErrorCode::precondition, "age intervention value '" + cell.value + "' is not a number");
    }
  } else if (cell.attribute == "org") {
    const auto v = parse_enum<OrganizationLevel>(cell.value);
    require(v.has_value(), "unknown organization level '" + cell.value + "'");
    p.organization_level = *v;
  } else if (cell.attribute == "sleep") {
    const auto v = parse_enum<SleepHabit>(cell.value);
    require(v.has_value(), "unknown sleep habit '" + cell.value + "'");
    p.sleep_habit = *v;
  } else {
    fail(ErrorCode::precondition, "unknown intervention attribute '" + cell.attribute + "'");
  }
  return household;
}

/// Environment and behavior embeddings of one generated household.
struct EmbeddedSample {
  std::vector<double> environment;
  std::vector<double> behavior;
};

using SampleGenerator = std::function<EmbeddedSample(const std::vector<Persona>& household, std::uint64_t seed)>;

struct InterventionOptions {
  int n = 30;
  int n_pca = 10;
  int permutations = 999;
  std::uint64_t seed = 0;
  bool parallel = false;
  std::vector<InterventionCell> cells = default_interventions();
};

struct InterventionResult {
  InterventionCell cell;
  bool valid = true;
  std::string error;
  double p_env = 1.0;
  double p_beh = 1.0;
  double f_stat = 0.0;
  double p_anova = 1.0;
  double d_env = 0.0;
  double d_beh = 0.0;
};

struct InterventionReport {
  std::vector<InterventionResult> cells;
  int n = 0;
};

struct ScalarComparison {
  std::vector<double> baseline;
  std::vector<double> intervention;
  double t = 0.0;
  double p = 1.0;
  double d = 0.0;
};

namespace detail {

inline stats::Matrix stack(const std::vector<std::vector<double>>& rows) {
  const auto cols = rows.front().size();
  for (const auto& r : rows)
    if (r.size() != cols) fail(ErrorCode::length_mismatch, "embeddings differ in dimension");
  return stats::from_rows(rows);
}

inline std::vector<double> standardized(std::vector<double> v, double mu, double sd) {
  for (double& x : v) x = sd > 0.0 ? (x - mu) / sd : 0.0;
  return v;
}

}  // namespace detail

/// PCA over the pooled rows, then Welch t and Cohen's d on cross-fitted
/// discriminant scores. The two folds' axes are estimated from each other's
/// data, which correlates the fold means, so the t statistic is referred to
/// its label-permutation distribution rather than Student's t. d is
/// positive when the intervention moves samples along the discriminant axis.
inline ScalarComparison compare_embeddings(const std::vector<std::vector<double>>& base,
                                           const std::vector<std::vector<double>>& inter, int n_pca,
                                           int permutations, std::uint64_t seed) {
  require(base.size() >= 2 && inter.size() >= 2, "comparison needs at least two samples per group");
  require(permutations >= 1, "comparison needs at least one permutation");
  std::vector<std::vector<double>> all = base;
  all.insert(all.end(), inter.begin(), inter.end());
  const stats::Matrix reduced = stats::pca_reduce(detail::stack(all), n_pca);
  if (reduced.cols() == 0) fail(ErrorCode::degenerate_variance, "embeddings do not vary");
  const auto nb = static_cast<Eigen::Index>(base.size());
  const auto statistic = [&](const std::vector<Eigen::Index>& order, ScalarComparison* keep) {
    stats::Matrix a(nb, reduced.cols()), b(reduced.rows() - nb, reduced.cols());
    for (Eigen::Index i = 0; i < reduced.rows(); ++i) {
      if (i < nb) a.row(i) = reduced.row(order[static_cast<std::size_t>(i)]);
      else b.row(i - nb) = reduced.row(order[static_cast<std::size_t>(i)]);
    }
    const auto scores = stats::crossfit_discriminant_scores(a, b);
    const double t = stats::welch_t(scores.a, scores.b).t;
    if (keep) {
      keep->baseline = scores.a;
      keep->intervention = scores.b;
      keep->t = t;
      keep->d = stats::cohens_d(scores.b, scores.a);
    }
    return t;
  };
  std::vector<Eigen::Index> order(static_cast<std::size_t>(reduced.rows()));
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<Eigen::Index>(i);
  ScalarComparison c;
  const double observed = std::abs(statistic(order, &c));
  Rng rng(seed);
  int extreme = 0;
  for (int k = 0; k < permutations; ++k) {
    rng.shuffle(order);
    double t = 0.0;
    try {
      t = statistic(order, nullptr);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::degenerate_variance) throw;
    }
    if (std::abs(t) >= observed - 1e-12 * std::max(1.0, observed)) ++extreme;
  }
  c.p = (1.0 + extreme) / (1.0 + permutations);
  return c;
}

/// For each (attribute, value) cell: N baseline and N intervention
/// households from disjoint seeds, compared per embedding space. The
/// four-group ANOVA runs on discriminant scores z-scored within their
/// space so the two spaces share a scale.
inline InterventionReport intervention_analysis(const std::vector<Persona>& base, const SampleGenerator& generator,
                                                const InterventionOptions& opts = {}) {
  require(static_cast<bool>(generator), "intervention analysis needs a generator");
  require(opts.n >= 2, "intervention analysis needs N >= 2");
  require(!base.empty(), "intervention analysis needs a baseline household");
  InterventionReport rep;
  rep.n = opts.n;
  const auto n = static_cast<std::size_t>(opts.n);
  for (std::size_t c = 0; c < opts.cells.size(); ++c) {
    const auto& cell = opts.cells[c];
    const auto modified = modify_attribute(base, cell);
    const std::uint64_t first = opts.seed + c * 2 * n;
    std::vector<EmbeddedSample> bs(n), is(n);
    auto make = [&](std::size_t i) {
      bs[i] = generator(base, first + i);
      is[i] = generator(modified, first + n + i);
    };
    if (opts.parallel) {
      std::vector<std::future<void>> jobs;
      for (std::size_t i = 0; i < n; ++i) jobs.push_back(std::async(std::launch::async, make, i));
      for (auto& j : jobs) j.get();
    } else {
      for (std::size_t i = 0; i < n; ++i) make(i);
    }
    InterventionResult r;
    r.cell = cell;
    try {
      std::vector<std::vector<double>> eb, ei, bb, bi;
      for (std::size_t i = 0; i < n; ++i) {
        eb.push_back(bs[i].environment);
        ei.push_back(is[i].environment);
        bb.push_back(bs[i].behavior);
        bi.push_back(is[i].behavior);
      }
      const auto env = compare_embeddings(eb, ei, opts.n_pca, opts.permutations, mix64(first ^ 0x656e76ULL));
      const auto beh = compare_embeddings(bb, bi, opts.n_pca, opts.permutations, mix64(first ^ 0x626568ULL));
      r.p_env = env.p;
      r.p_beh = beh.p;
      r.d_env = env.d;
      r.d_beh = beh.d;
      auto scaled = [](const ScalarComparison& s) {
        std::vector<double> pooled = s.baseline;
        pooled.insert(pooled.end(), s.intervention.begin(), s.intervention.end());
        const double mu = stats::mean(pooled), sd = std::sqrt(stats::sample_variance(pooled));
        return std::make_pair(detail::standardized(s.baseline, mu, sd), detail::standardized(s.intervention, mu, sd));
      };
      const auto [e0, e1] = scaled(env);
      const auto [b0, b1] = scaled(beh);
      const auto f = stats::anova_f({e0, e1, b0, b1});
      r.f_stat = f.f;
      r.p_anova = f.p;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::degenerate_variance) throw;
      r.valid = false;
      r.error = e.what();
    }
    rep.cells.push_back(std::move(r));
  }
  return rep;
}

inline std::string intervention_csv(const InterventionReport& rep) {
  std::vector<csv::Row> rows = {{"attribute", "value", "n", "valid", "p_env", "p_beh", "f_stat", "p_anova", "d_env", "d_beh"}};
  for (const auto& c : rep.cells)
    rows.push_back({c.cell.attribute, c.cell.value, std::to_string(rep.n), c.valid ? "true" : "false",
                    fmt_fixed(c.p_env, 6), fmt_fixed(c.p_beh, 6), fmt_fixed(c.f_stat, 6), fmt_fixed(c.p_anova, 6),
                    fmt_fixed(c.d_env, 6), fmt_fixed(c.d_beh, 6)});
  return csv::write(rows);
}

}  // namespace hhgen::eval
