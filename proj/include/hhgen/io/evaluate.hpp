#pragma once

// Evaluation over stored manifests and call-ledger reports. Every mode
// writes a CSV and a plain-text table into the output directory.

#include <glob.h>

#include <algorithm>
#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "hhgen/eval/alignment.hpp"
#include "hhgen/eval/clustering.hpp"
#include "hhgen/eval/hourly.hpp"
#include "hhgen/eval/intervention.hpp"
#include "hhgen/eval/mediation.hpp"
#include "hhgen/eval/reports.hpp"
#include "hhgen/io/manifest.hpp"

namespace hhgen::io {

inline const std::vector<std::string>& evaluation_modes() {
  static const std::vector<std::string> modes = {"alignment", "mediation", "iterative", "intervention", "compare"};
  return modes;
}

/// Expands shell-style patterns. A matched directory contributes its own
/// manifest.json, or those of its immediate subdirectories; a wildcard only
/// picks up files named manifest.json.
inline std::vector<std::string> find_manifests(const std::vector<std::string>& patterns) {
  namespace fs = std::filesystem;
  std::set<std::string> found;
  auto add_dir = [&](const fs::path& dir) {
    if (fs::exists(dir / kManifestFile)) {
      found.insert((dir / kManifestFile).lexically_normal().string());
      return;
    }
    for (const auto& entry : fs::directory_iterator(dir))
      if (entry.is_directory() && fs::exists(entry.path() / kManifestFile))
        found.insert((entry.path() / kManifestFile).lexically_normal().string());
  };
  for (const auto& pattern : patterns) {
    glob_t g{};
    const int rc = ::glob(pattern.c_str(), 0, nullptr, &g);
    std::vector<std::string> matches;
    if (rc == 0)
      for (std::size_t i = 0; i < g.gl_pathc; ++i) matches.emplace_back(g.gl_pathv[i]);
    globfree(&g);
    for (const auto& m : matches) {
      if (fs::is_directory(m)) add_dir(m);
      else if (fs::is_regular_file(m) && (m == pattern || fs::path(m).filename() == kManifestFile))
        found.insert(fs::path(m).lexically_normal().string());
    }
  }
  return {found.begin(), found.end()};
}

inline std::vector<Manifest> load_manifests(const std::vector<std::string>& patterns) {
  const auto paths = find_manifests(patterns);
  if (paths.empty()) fail(ErrorCode::io, "no manifests matched the input pattern");
  std::vector<Manifest> out;
  for (const auto& p : paths) out.push_back(load_manifest(p));
  return out;
}

/// Member names and ids become role tokens, room labels become their
/// function, so embeddings compare content rather than naming.
inline std::string standardized_text(const std::string& text, const std::vector<Persona>& personas,
                                     const EnvironmentSchema* env = nullptr) {
  std::map<std::string, std::string> names_to_ids, rooms;
  std::vector<std::string> ids;
  for (const auto& p : personas) {
    ids.push_back(p.id);
    if (!p.name.empty() && p.name != p.id) names_to_ids[p.name] = p.id;
  }
  if (env)
    for (const auto& r : env->rooms)
      if (!r.label.empty()) rooms[r.label] = std::string(to_string(r.function));
  const std::string with_ids = embed::standardize_description(text, {}, names_to_ids);
  return embed::standardize_description(with_ids, ids, rooms);
}

struct HouseholdTexts {
  std::string persona;
  std::string environment;
  std::string behavior;
};

inline HouseholdTexts household_texts(const std::vector<Persona>& personas, const EnvironmentSchema& env,
                                      const ActivitySchedule& sched) {
  return {standardized_text(describe_household(personas), personas, &env),
          standardized_text(describe_environment(env), personas, &env),
          standardized_text(describe_schedule(sched), personas, &env)};
}

struct EmbeddedHouseholds {
  stats::Matrix persona, environment, behavior;
};

inline EmbeddedHouseholds embed_households(const std::vector<HouseholdTexts>& texts,
                                           const embed::EmbeddingProvider& embed) {
  std::vector<std::vector<double>> p, e, b;
  for (const auto& t : texts) {
    p.push_back(embed.embed_text(t.persona));
    e.push_back(embed.embed_text(t.environment));
    b.push_back(embed.embed_text(t.behavior));
  }
  return {stats::from_rows(p), stats::from_rows(e), stats::from_rows(b)};
}

struct EvaluateOptions {
  std::string mode;
  std::vector<std::string> inputs;  // glob patterns
  std::string out_dir;
  std::uint64_t seed = 0;
  int clusters = 0;  // mediation and iterative; 0 picks the default
  int n_pca = 10;
  // intervention
  std::string config_path;   // reruns this config; otherwise the manifest config with catalog_path
  std::string catalog_path;
  int intervention_n = 30;
  int permutations = 999;
  bool parallel = false;
  // compare
  std::string reference_csv;  // empty compares the manifests with themselves
  std::string taxonomy_csv;
  int feature_clusters = 4;
};

struct EvaluateOutput {
  std::vector<std::string> files;
  std::string summary;  // the text table of the mode
};

namespace detail {

inline void write_pair(const EvaluateOptions& o, EvaluateOutput& out, const std::string& stem, const std::string& csv_text,
                       const std::string& table) {
  const auto base = std::filesystem::path(o.out_dir);
  write_text_file((base / (stem + ".csv")).string(), csv_text);
  write_text_file((base / (stem + ".txt")).string(), table);
  out.files.push_back((base / (stem + ".csv")).string());
  out.files.push_back((base / (stem + ".txt")).string());
  out.summary += table;
}

inline void write_extra(const EvaluateOptions& o, EvaluateOutput& out, const std::string& name, const std::string& text) {
  const auto path = (std::filesystem::path(o.out_dir) / name).string();
  write_text_file(path, text);
  out.files.push_back(path);
}

inline std::vector<HouseholdTexts> final_texts(const std::vector<Manifest>& ms) {
  std::vector<HouseholdTexts> out;
  for (const auto& m : ms) out.push_back(household_texts(m.personas, m.env, m.schedule));
  return out;
}

inline eval::MediationConfig mediation_config(const EvaluateOptions& o) {
  eval::MediationConfig c;
  c.n_pca = o.n_pca;
  c.clusters = o.clusters;
  c.seed = o.seed;
  return c;
}

inline std::string semantic_alignment_csv(const eval::SemanticAlignment& a) {
  auto row = [&](const std::string& pair, const eval::MeanSd& m) {
    return csv::Row{pair, fmt_fixed(m.mean, 6), fmt_fixed(m.sd, 6), std::to_string(a.n)};
  };
  return csv::write({{"pair", "mean", "sd", "n"},
                     row("persona_environment", a.persona_env),
                     row("environment_behavior", a.env_behavior),
                     row("persona_behavior", a.persona_behavior)});
}

inline void run_alignment(const EvaluateOptions& o, const std::vector<Manifest>& ms, const embed::EmbeddingProvider& e,
                          EvaluateOutput& out) {
  require(ms.size() >= 2, "alignment needs at least two manifests");
  std::vector<eval::AlignmentSample> samples;
  for (const auto& t : final_texts(ms)) samples.push_back({t.persona, t.environment, t.behavior, {}, {}});
  const auto a = eval::semantic_alignment(samples, e);
  write_pair(o, out, "alignment", semantic_alignment_csv(a), eval::semantic_alignment_table(a));
}

inline void run_mediation(const EvaluateOptions& o, const std::vector<Manifest>& ms, const embed::EmbeddingProvider& e,
                          EvaluateOutput& out) {
  require(ms.size() >= eval::kMinMediationSamples, "mediation needs at least 10 manifests");
  const auto x = embed_households(final_texts(ms), e);
  const auto r = eval::mediation_analysis(x.persona, x.environment, x.behavior, mediation_config(o));
  write_pair(o, out, "mediation", eval::mediation_csv(r), eval::mediation_table(r));

  const auto n = x.persona.rows();
  stats::Matrix all(3 * n, x.persona.cols());
  all << x.persona, x.environment, x.behavior;
  std::vector<std::string> ids, groups;
  for (const char* g : {"persona", "environment", "behavior"})
    for (const auto& m : ms) {
      ids.push_back(m.manifest_id);
      groups.push_back(g);
    }
  write_extra(o, out, "coordinates.csv", eval::coordinates_2d_csv(all, ids, groups));
}

/// Iteration i uses snapshot i of every manifest; a run that stopped
/// earlier contributes its last snapshot.
inline void run_iterative(const EvaluateOptions& o, const std::vector<Manifest>& ms, const embed::EmbeddingProvider& e,
                          EvaluateOutput& out) {
  require(ms.size() >= eval::kMinMediationSamples, "iterative evaluation needs at least 10 manifests");
  std::size_t steps = 0;
  for (const auto& m : ms) {
    require(!m.snapshots.empty(), "manifest " + m.path + " has no snapshots");
    steps = std::max(steps, m.snapshots.size());
  }
  std::vector<eval::IterationEmbeddings> history;
  for (std::size_t i = 0; i < steps; ++i) {
    std::vector<HouseholdTexts> texts;
    for (const auto& m : ms) {
      const auto& s = m.snapshots[std::min(i, m.snapshots.size() - 1)];
      texts.push_back(household_texts(m.personas, s.env, s.schedule));
    }
    const auto x = embed_households(texts, e);
    history.push_back({x.persona, x.environment, x.behavior});
  }
  const auto rows = eval::iterative_improvement(history, mediation_config(o));
  write_pair(o, out, "iterative", eval::iterative_csv(rows), eval::iterative_table(rows));
}

/// Rebuilds a runnable config from a manifest; the catalog must be the one
/// the manifest was generated with.
inline RunConfig rerun_config(const EvaluateOptions& o, const Manifest& m) {
  if (!o.config_path.empty()) {
    auto c = load_config(o.config_path);
    c.provider.kind = "stub";
    if (!c.generation.seed) c.generation.seed = o.seed;
    return c;
  }
  if (o.catalog_path.empty()) fail(ErrorCode::config, "intervention needs a config or a catalog path");
  json j = m.config;
  j["catalog"] = std::filesystem::absolute(o.catalog_path).string();
  j["provider"] = {{"kind", "stub"}};
  if (!j.contains("generation") || !j["generation"].contains("seed") || j["generation"]["seed"].is_null())
    j["generation"]["seed"] = o.seed;
  auto c = config_from_json(j, {});
  if (m.config.contains("catalog_hash") && m.config.at("catalog_hash").get<std::string>() != catalog_hash(c.catalog))
    fail(ErrorCode::config, "catalog " + o.catalog_path + " differs from the one used for " + m.path);
  return c;
}

inline void run_intervention(const EvaluateOptions& o, const std::vector<Manifest>& ms,
                             const embed::EmbeddingProvider& e, EvaluateOutput& out) {
  const auto cfg = rerun_config(o, ms.front());
  eval::SampleGenerator gen = [&cfg, &e](const std::vector<Persona>& household, std::uint64_t seed) {
    llm::GenParams params = cfg.generation;
    params.seed = seed;
    const auto run = run_variation(cfg, household, params, e);
    const auto t = household_texts(household, run.result.env, run.result.schedule);
    return eval::EmbeddedSample{e.embed_text(t.environment), e.embed_text(t.behavior)};
  };
  eval::InterventionOptions io;
  io.n = o.intervention_n;
  io.n_pca = o.n_pca;
  io.permutations = o.permutations;
  io.seed = o.seed;
  io.parallel = o.parallel;
  const auto rep = eval::intervention_analysis(ms.front().personas, gen, io);
  write_pair(o, out, "intervention", eval::intervention_csv(rep), eval::intervention_table(rep));
}

inline void run_compare(const EvaluateOptions& o, const std::vector<Manifest>& ms, EvaluateOutput& out) {
  std::vector<ActivitySchedule> schedules;
  for (const auto& m : ms) schedules.push_back(m.schedule);
  const auto generated = eval::traces_from_schedules(schedules);
  const auto reference = o.reference_csv.empty() ? generated : eval::load_trace_csv(o.reference_csv);
  const auto taxonomy = o.taxonomy_csv.empty() ? eval::Taxonomy{} : eval::load_taxonomy_csv(o.taxonomy_csv);
  const auto r = eval::dataset_alignment(generated, reference, taxonomy);
  std::string table = eval::alignment_table(r);
  for (const auto& w : r.warnings) table += "warning: " + w + "\n";
  write_pair(o, out, "compare", eval::alignment_csv(r), table);
  write_extra(o, out, "generated_traces.csv", eval::trace_csv(generated));
  write_extra(o, out, "generated_profiles.csv", eval::profiles_csv(eval::label_profiles(generated, taxonomy)));

  const auto features = eval::activity_features(schedules);
  const int k = std::min<int>(o.feature_clusters, static_cast<int>(features.size()));
  if (k >= 1) write_extra(o, out, "clustering.csv", eval::clustering_csv(eval::activity_feature_clustering(schedules, k, o.seed)));
}

}  // namespace detail

inline EvaluateOutput evaluate(const EvaluateOptions& o, const embed::EmbeddingProvider& embed) {
  if (std::find(evaluation_modes().begin(), evaluation_modes().end(), o.mode) == evaluation_modes().end())
    fail(ErrorCode::precondition, "unknown evaluation mode '" + o.mode + "'");
  require(!o.out_dir.empty(), "evaluation needs an output directory");
  const auto ms = load_manifests(o.inputs);
  EvaluateOutput out;
  if (o.mode == "alignment") detail::run_alignment(o, ms, embed, out);
  else if (o.mode == "mediation") detail::run_mediation(o, ms, embed, out);
  else if (o.mode == "iterative") detail::run_iterative(o, ms, embed, out);
  else if (o.mode == "intervention") detail::run_intervention(o, ms, embed, out);
  else detail::run_compare(o, ms, out);
  return out;
}

// ---------------------------------------------------------------------------
// Call report.

struct CallRow {
  std::string module;
  long calls = 0;
  double seconds = 0.0;
};

/// Per-module calls from the manifest ledger and seconds from the sibling
/// timing.json when present. An empty ledger gives no rows.
inline std::vector<CallRow> report_calls(const std::string& manifest_path) {
  const auto m = load_manifest(manifest_path);
  const auto calls = llm::CallLedger::modules_from_json(m.ledger);
  std::map<std::string, llm::CallCounters> timing;
  const auto timing_path = std::filesystem::path(manifest_path).parent_path() / kTimingFile;
  if (std::filesystem::exists(timing_path)) {
    try {
      timing = llm::CallLedger::modules_from_json(json::parse(read_text_file(timing_path.string())).value("ledger", json::object()));
    } catch (const json::exception& e) {
      fail(ErrorCode::io, "invalid timing file " + timing_path.string() + ": " + e.what());
    }
  }
  std::vector<CallRow> rows;
  for (const auto& [module, c] : calls) {
    const auto it = timing.find(module);
    rows.push_back({module, c.calls, it == timing.end() ? 0.0 : it->second.seconds});
  }
  return rows;
}

inline std::string call_report_csv(const std::vector<CallRow>& rows) {
  std::vector<csv::Row> out = {{"module", "calls", "seconds"}};
  for (const auto& r : rows) out.push_back({r.module, std::to_string(r.calls), fmt_fixed(r.seconds, 2)});
  return csv::write(out);
}

inline std::string call_report_table(const std::vector<CallRow>& rows) {
  return eval::text_table(csv::parse(call_report_csv(rows)));
}

}  // namespace hhgen::io
