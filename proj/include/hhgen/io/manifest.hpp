#pragma once

// manifest.json: everything a run produced except wall-clock time, which
// goes to timing.json so the manifest is reproducible byte for byte.
// manifest_id is the hash of the canonical manifest body without that key.

#include <filesystem>
#include <string>
#include <vector>

#include "hhgen/io/pipeline.hpp"

namespace hhgen::controller {

inline void to_json(json& j, const IterationMetrics& m) {
  j = json{{"i", m.i},         {"rho", m.rho},   {"gamma", m.gamma},           {"sigma", m.sigma},
           {"user", m.user},   {"score", m.score}, {"changed_env", m.changed_env}, {"changed_act", m.changed_act}};
}
inline void from_json(const json& j, IterationMetrics& m) {
  j.at("i").get_to(m.i);
  j.at("rho").get_to(m.rho);
  j.at("gamma").get_to(m.gamma);
  j.at("sigma").get_to(m.sigma);
  j.at("user").get_to(m.user);
  j.at("score").get_to(m.score);
  j.at("changed_env").get_to(m.changed_env);
  j.at("changed_act").get_to(m.changed_act);
}

}  // namespace hhgen::controller

namespace hhgen::io {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr const char* kManifestFile = "manifest.json";
inline constexpr const char* kTimingFile = "timing.json";

/// The parts of a manifest the evaluation modes read back.
struct Manifest {
  std::string path;
  std::string manifest_id;
  std::string config_hash;
  bool reproducible = true;
  std::uint64_t seed = 0;
  int variation = 0;
  std::vector<Persona> personas;
  EnvironmentConstraints constraints;
  EnvironmentSchema env;
  ActivitySchedule schedule;
  std::vector<InteractionTranscript> transcripts;
  std::vector<controller::Snapshot> snapshots;
  std::vector<controller::IterationMetrics> history;
  std::string stop_reason;
  json ledger;  // call and token counts per module and step
  long provider_calls = 0;
  json config;  // resolved config
};

inline std::string config_hash(const RunConfig& cfg, const std::string& provider_id, const std::string& embedder_id) {
  json j = resolved_config_json(cfg);
  j["provider_id"] = provider_id;
  j["embedder_id"] = embedder_id;
  return hex64(fnv1a64(j.dump()));
}

inline json manifest_json(const RunConfig& cfg, const VariationRun& run, const std::string& embedder_id) {
  const auto provider_id = make_provider(cfg.provider)->id();
  json snapshots = json::array();
  for (std::size_t i = 0; i < run.result.snapshots.size(); ++i)
    snapshots.push_back({{"iteration", i}, {"env", run.result.snapshots[i].env}, {"schedule", run.result.snapshots[i].schedule}});
  json unplaced = json::array(), unsatisfied = json::array(), dropped = json::array();
  for (const auto& u : run.result.unplaced) unplaced.push_back({{"room", u.room}, {"asset", u.asset}, {"reason", u.reason}});
  for (const auto& u : run.result.unsatisfied)
    unsatisfied.push_back({{"label", u.label}, {"room", u.room}, {"reason", u.reason}});
  for (const auto& d : run.result.dropped)
    dropped.push_back({{"member", d.member}, {"label", d.label}, {"object", d.object}, {"reason", d.reason}});
  json body{{"tool_version", kToolVersion},
            {"config_hash", config_hash(cfg, provider_id, embedder_id)},
            {"config", resolved_config_json(cfg)},
            {"reproducible", cfg.provider.stub()},
            {"provider_id", provider_id},
            {"embedder_id", embedder_id},
            {"variation", run.variation},
            {"seed", run.params.seed.value_or(0)},
            {"params", run.params},
            {"personas", run.personas},
            {"constraints", cfg.constraints},
            {"final", {{"env", run.result.env}, {"schedule", run.result.schedule}, {"transcripts", run.result.transcripts}}},
            {"snapshots", snapshots},
            {"history", run.result.history},
            {"stop_reason", run.result.stop_reason},
            {"diagnostics", {{"unplaced", unplaced}, {"unsatisfied", unsatisfied}, {"dropped", dropped}}},
            {"ledger", run.ledger ? run.ledger->counts_json() : json::object()},
            {"provider_calls", run.provider_calls}};
  body["manifest_id"] = hex64(fnv1a64(body.dump()));
  return body;
}

inline json timing_json(const VariationRun& run) {
  return {{"seconds", run.seconds}, {"ledger", run.ledger ? run.ledger->timing_json() : json::object()}};
}

/// True when the stored id matches the content.
inline bool manifest_id_matches(const json& manifest) {
  json body = manifest;
  const auto id = body.value("manifest_id", std::string{});
  body.erase("manifest_id");
  return id == hex64(fnv1a64(body.dump()));
}

inline Manifest manifest_from_json(const json& j, const std::string& path = {}) {
  Manifest m;
  m.path = path;
  try {
    m.manifest_id = j.at("manifest_id").get<std::string>();
    m.config_hash = j.at("config_hash").get<std::string>();
    m.reproducible = j.value("reproducible", false);
    m.seed = j.at("seed").get<std::uint64_t>();
    m.variation = j.value("variation", 0);
    m.personas = j.at("personas").get<std::vector<Persona>>();
    m.constraints = j.at("constraints").get<EnvironmentConstraints>();
    const auto& fin = j.at("final");
    m.env = fin.at("env").get<EnvironmentSchema>();
    m.schedule = fin.at("schedule").get<ActivitySchedule>();
    m.transcripts = fin.at("transcripts").get<std::vector<InteractionTranscript>>();
    for (const auto& s : j.at("snapshots"))
      m.snapshots.push_back({s.at("env").get<EnvironmentSchema>(), s.at("schedule").get<ActivitySchedule>()});
    m.history = j.at("history").get<std::vector<controller::IterationMetrics>>();
    m.stop_reason = j.value("stop_reason", std::string{});
    m.ledger = j.value("ledger", json::object());
    m.provider_calls = j.value("provider_calls", 0L);
    m.config = j.value("config", json::object());
  } catch (const json::exception& e) {
    fail(ErrorCode::io, "invalid manifest " + path + ": " + e.what());
  }
  return m;
}

inline Manifest load_manifest(const std::string& path) {
  const std::string text = read_text_file(path);
  try {
    return manifest_from_json(json::parse(text), path);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::io, "cannot parse manifest " + path + ": " + e.what());
  }
}

}  // namespace hhgen::io
