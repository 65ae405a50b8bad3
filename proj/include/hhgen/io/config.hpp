#pragma once

// Run configuration. File references are resolved against the directory of
// the config file and loaded eagerly, so a bad path fails at load time.
//
// {
//   "personas": "household.json",          file holding a JSON array of personas
//   "constraints": "apartment.json",
//   "catalog": "../data/catalog.json",     JSON or CSV asset manifest
//   "robot": "robot.json" | {...},          optional
//   "horizon_days": 1,
//   "binding_mode": "lenient" | "strict",
//   "window": 12,
//   "convergence": {"max_iterations", "theta", "weights": {"user", "density",
//                   "granularity", "similarity"}, "rho_max", "gamma_max", "invert_gamma"},
//   "generation": {"temperature", "top_p", "top_k", "max_tokens", "seed"},
//   "provider": {"kind": "stub" | "remote", "llm_url", "llm_model", "embed_url", "embed_model"},
//   "variations": 1,
//   "variation_overrides": [{"temperature", "top_p", "top_k"}, ...],
//   "workers": 0
// }

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "hhgen/activity/generator.hpp"
#include "hhgen/controller/metrics.hpp"
#include "hhgen/core/json.hpp"
#include "hhgen/env/catalog.hpp"
#include "hhgen/llm/params.hpp"
#include "hhgen/util/fs.hpp"
#include "hhgen/util/hash.hpp"

namespace hhgen::io {

struct ProviderConfig {
  std::string kind = "stub";
  std::string llm_url;
  std::string llm_model;
  std::string embed_url;
  std::string embed_model;

  bool stub() const { return kind == "stub"; }
};

struct ParamOverride {
  std::optional<double> temperature;
  std::optional<double> top_p;
  std::optional<int> top_k;
};

struct RunConfig {
  std::string source;  // path of the config file, empty when built in memory
  std::vector<Persona> personas;
  EnvironmentConstraints constraints;
  std::string catalog_path;
  env::AssetCatalog catalog;
  std::optional<RobotProfile> robot;
  int horizon_days = 1;
  activity::BindingMode binding_mode = activity::BindingMode::lenient;
  int window = 12;
  controller::ConvergenceConfig convergence;
  llm::GenParams generation;
  ProviderConfig provider;
  int variations = 1;
  std::vector<ParamOverride> overrides;
  int workers = 0;  // 0 picks the hardware concurrency

  void validate() const {
    auto bad = [](const std::string& m) { fail(ErrorCode::config, m); };
    if (personas.empty()) bad("config needs at least one persona");
    if (horizon_days < 1) bad("horizon_days must be at least 1");
    if (window < 0) bad("window must be non-negative");
    if (variations < 1) bad("variations must be at least 1");
    if (workers < 0) bad("workers must be non-negative");
    if (provider.kind != "stub" && provider.kind != "remote") bad("provider kind must be 'stub' or 'remote'");
    if (provider.stub() && !generation.seed) bad("the stub provider needs generation.seed");
    if (!provider.stub() && provider.llm_url.empty()) bad("the remote provider needs llm_url or HHGEN_LLM_URL");
    if (!(constraints.bounds.width > 0.0 && constraints.bounds.depth > 0.0)) bad("constraint bounds must be positive");
    if (catalog.size() == 0) bad("asset catalog is empty");
    convergence.validate();
    try {
      generation.validate();
    } catch (const Error& e) {
      bad(std::string("generation: ") + e.what());
    }
  }
};

namespace detail {

inline std::string resolve(const std::filesystem::path& base, const std::string& p) {
  const std::filesystem::path path(p);
  return (path.is_absolute() ? path : base / path).lexically_normal().string();
}

inline json load_json_file(const std::string& path, const std::string& what) {
  if (!std::filesystem::exists(path)) fail(ErrorCode::config, what + " file not found: " + path);
  try {
    return json::parse(read_text_file(path));
  } catch (const json::exception& e) {
    fail(ErrorCode::config, "invalid " + what + " file " + path + ": " + e.what());
  }
}

inline std::string env_or(const char* name, const std::string& fallback) {
  const char* v = std::getenv(name);
  return v && *v ? std::string(v) : fallback;
}

}  // namespace detail

/// Parses a config document. Relative paths resolve against `base_dir`.
inline RunConfig config_from_json(const json& j, const std::string& base_dir) {
  const std::filesystem::path base(base_dir.empty() ? "." : base_dir);
  RunConfig c;
  try {
    for (const char* key : {"personas", "constraints", "catalog"})
      if (!j.contains(key)) fail(ErrorCode::config, std::string("config is missing '") + key + "'");

    auto inline_or_file = [&](const json& v, const std::string& what) {
      return v.is_string() ? detail::load_json_file(detail::resolve(base, v.get<std::string>()), what) : v;
    };
    c.personas = inline_or_file(j.at("personas"), "personas").get<std::vector<Persona>>();
    c.constraints = inline_or_file(j.at("constraints"), "constraints").get<EnvironmentConstraints>();
    c.catalog_path = detail::resolve(base, j.at("catalog").get<std::string>());
    if (!std::filesystem::exists(c.catalog_path)) fail(ErrorCode::config, "catalog file not found: " + c.catalog_path);
    c.catalog = env::load_catalog(c.catalog_path);
    if (j.contains("robot") && !j.at("robot").is_null()) c.robot = inline_or_file(j.at("robot"), "robot").get<RobotProfile>();

    c.horizon_days = j.value("horizon_days", 1);
    c.window = j.value("window", 12);
    const auto mode = j.value("binding_mode", std::string("lenient"));
    if (mode == "strict") c.binding_mode = activity::BindingMode::strict;
    else if (mode != "lenient") fail(ErrorCode::config, "binding_mode must be 'strict' or 'lenient'");

    if (j.contains("convergence")) {
      const auto& cv = j.at("convergence");
      c.convergence.max_iterations = cv.value("max_iterations", c.convergence.max_iterations);
      c.convergence.theta = cv.value("theta", c.convergence.theta);
      if (cv.contains("weights")) {
        const auto& w = cv.at("weights");
        c.convergence.w1 = w.value("user", c.convergence.w1);
        c.convergence.w2 = w.value("density", c.convergence.w2);
        c.convergence.w3 = w.value("granularity", c.convergence.w3);
        c.convergence.w4 = w.value("similarity", c.convergence.w4);
      }
      c.convergence.rho_max = cv.value("rho_max", c.convergence.rho_max);
      c.convergence.gamma_max = cv.value("gamma_max", c.convergence.gamma_max);
      c.convergence.invert_gamma = cv.value("invert_gamma", c.convergence.invert_gamma);
    }
    if (j.contains("generation")) c.generation = j.at("generation").get<llm::GenParams>();

    const json pv = j.value("provider", json::object());
    c.provider.kind = pv.value("kind", std::string("stub"));
    c.provider.llm_url = detail::env_or("HHGEN_LLM_URL", pv.value("llm_url", std::string{}));
    c.provider.llm_model = detail::env_or("HHGEN_LLM_MODEL", pv.value("llm_model", std::string{}));
    c.provider.embed_url = detail::env_or("HHGEN_EMBED_URL", pv.value("embed_url", std::string{}));
    c.provider.embed_model = detail::env_or("HHGEN_EMBED_MODEL", pv.value("embed_model", std::string{}));

    c.variations = j.value("variations", 1);
    c.workers = j.value("workers", 0);
    for (const auto& o : j.value("variation_overrides", json::array())) {
      ParamOverride po;
      if (o.contains("temperature")) po.temperature = o.at("temperature").get<double>();
      if (o.contains("top_p")) po.top_p = o.at("top_p").get<double>();
      if (o.contains("top_k")) po.top_k = o.at("top_k").get<int>();
      c.overrides.push_back(po);
    }
  } catch (const json::exception& e) {
    fail(ErrorCode::config, std::string("invalid config: ") + e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::config) throw;
    fail(ErrorCode::config, e.what());
  }
  c.validate();
  return c;
}

inline RunConfig load_config(const std::string& path) {
  const json j = detail::load_json_file(path, "config");
  auto c = config_from_json(j, std::filesystem::path(path).parent_path().string());
  c.source = path;
  return c;
}

/// Generation parameters of variation `v`: seed + v plus any override.
inline llm::GenParams variation_params(const RunConfig& c, int v) {
  llm::GenParams p = c.generation;
  p.seed = c.generation.seed.value_or(0) + static_cast<std::uint64_t>(v);
  if (!c.overrides.empty()) {
    const auto& o = c.overrides[static_cast<std::size_t>(v) % c.overrides.size()];
    if (o.temperature) p.temperature = *o.temperature;
    if (o.top_p) p.top_p = *o.top_p;
    if (o.top_k) p.top_k = *o.top_k;
  }
  return p;
}

inline std::string catalog_hash(const env::AssetCatalog& catalog) {
  return hex64(fnv1a64(json(catalog.records()).dump()));
}

/// Resolved, path-free form of the config. Catalog content enters through
/// its hash so moving files does not change the identity of a run.
inline json resolved_config_json(const RunConfig& c) {
  json conv{{"max_iterations", c.convergence.max_iterations},
            {"theta", c.convergence.theta},
            {"weights", {{"user", c.convergence.w1}, {"density", c.convergence.w2},
                         {"granularity", c.convergence.w3}, {"similarity", c.convergence.w4}}},
            {"rho_max", c.convergence.rho_max},
            {"gamma_max", c.convergence.gamma_max},
            {"invert_gamma", c.convergence.invert_gamma}};
  json overrides = json::array();
  for (const auto& o : c.overrides) {
    json x = json::object();
    if (o.temperature) x["temperature"] = *o.temperature;
    if (o.top_p) x["top_p"] = *o.top_p;
    if (o.top_k) x["top_k"] = *o.top_k;
    overrides.push_back(x);
  }
  return {{"personas", c.personas},
          {"constraints", c.constraints},
          {"catalog_hash", catalog_hash(c.catalog)},
          {"robot", c.robot ? json(*c.robot) : json(nullptr)},
          {"horizon_days", c.horizon_days},
          {"binding_mode", c.binding_mode == activity::BindingMode::strict ? "strict" : "lenient"},
          {"window", c.window},
          {"convergence", conv},
          {"generation", c.generation},
          {"provider", {{"kind", c.provider.kind}, {"llm_model", c.provider.llm_model},
                        {"embed_model", c.provider.embed_model}}},
          {"variation_overrides", overrides}};
}

}  // namespace hhgen::io
