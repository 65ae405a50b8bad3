#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "hhgen/core/describe.hpp"
#include "hhgen/embed/provider.hpp"
#include "hhgen/embed/standardize.hpp"
#include "hhgen/util/csv.hpp"

namespace hhgen::controller {

struct ConvergenceConfig {
  int max_iterations = 5;  // N
  double theta = 0.8;
  double w1 = 0.0;  // optional user metric
  double w2 = 1.0 / 3.0;
  double w3 = 1.0 / 3.0;
  double w4 = 1.0 / 3.0;
  double rho_max = 10.0;
  double gamma_max = 120.0;
  bool invert_gamma = false;  // score fine-grained schedules higher

  void validate() const {
    auto bad = [](const std::string& m) { fail(ErrorCode::config, m); };
    if (max_iterations < 1) bad("max iterations must be at least 1");
    if (!(theta >= 0.0 && theta <= 1.0)) bad("theta must lie in [0, 1]");
    for (double w : {w1, w2, w3, w4})
      if (!(w >= 0.0)) bad("weights must be non-negative");
    if (std::abs(w1 + w2 + w3 + w4 - 1.0) > 1e-9) bad("weights must sum to 1");
    if (!(rho_max > 0.0) || !(gamma_max > 0.0)) bad("metric normalizers must be positive");
  }
};

struct IterationMetrics {
  int i = 0;
  double rho = 0.0;
  double gamma = 0.0;
  double sigma = 0.0;
  double user = 0.0;
  double score = 0.0;
  bool changed_env = false;
  bool changed_act = false;

  bool operator==(const IterationMetrics&) const = default;
};

/// Objects per room.
inline double compute_density(const EnvironmentSchema& env) {
  if (env.rooms.empty()) fail(ErrorCode::zero_rooms, "density of an environment without rooms");
  return static_cast<double>(env.objects.size()) / static_cast<double>(env.rooms.size());
}

/// Mean activity duration in minutes.
inline double compute_granularity(const ActivitySchedule& sched) {
  if (sched.activities.empty()) fail(ErrorCode::empty_schedule, "granularity of an empty schedule");
  double total = 0.0;
  for (const auto& a : sched.activities) total += a.duration;
  return total / static_cast<double>(sched.activities.size());
}

inline std::string generic_room_name(RoomFunction f) {
  switch (f) {
    case RoomFunction::sleeping: return "bedroom";
    case RoomFunction::office: return "office";
    case RoomFunction::kitchen: return "kitchen";
    case RoomFunction::living: return "living room";
    case RoomFunction::dining: return "dining room";
    case RoomFunction::bath: return "bathroom";
    case RoomFunction::hobby: return "hobby room";
    case RoomFunction::other: return "utility room";
  }
  return "room";
}

/// Replaces member names, member ids and specific room labels with role
/// tokens and generic room names so that similarity reflects content.
inline std::string standardized(const std::string& text, const EnvironmentSchema& env,
                                const std::vector<Persona>& personas) {
  std::vector<std::string> names, ids;
  for (const auto& p : personas) {
    names.push_back(p.name);
    ids.push_back(p.id);
  }
  std::map<std::string, std::string> rooms;
  for (const auto& r : env.rooms) rooms[r.label] = generic_room_name(r.function);
  const auto by_name = embed::standardize_description(text, names, rooms);
  return embed::standardize_description(by_name, ids, {});
}

/// Cosine between the embedded standardized environment and schedule
/// descriptions (regenerated from structure when empty).
inline double compute_semantic_similarity(const EnvironmentSchema& env, const ActivitySchedule& sched,
                                          const embed::EmbeddingProvider& embed,
                                          const std::vector<Persona>& personas = {}) {
  const std::string e = env.description.empty() ? describe_environment(env) : env.description;
  const std::string a = sched.description.empty() ? describe_schedule(sched) : sched.description;
  require(!trim(e).empty() && !trim(a).empty(), "similarity needs non-empty descriptions");
  return embed::text_similarity(embed, standardized(e, env, personas), standardized(a, env, personas));
}

inline double compute_score(const IterationMetrics& m, const ConvergenceConfig& cfg) {
  cfg.validate();
  double g = std::min(m.gamma / cfg.gamma_max, 1.0);
  if (cfg.invert_gamma) g = 1.0 - g;
  return cfg.w1 * m.user + cfg.w2 * std::min(m.rho / cfg.rho_max, 1.0) + cfg.w3 * g + cfg.w4 * std::max(m.sigma, 0.0);
}

inline std::string history_csv(const std::vector<IterationMetrics>& history) {
  auto num = [](double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  std::vector<csv::Row> rows = {{"i", "rho", "gamma", "sigma", "score", "changed_env", "changed_act"}};
  for (const auto& m : history)
    rows.push_back({std::to_string(m.i), num(m.rho), num(m.gamma), num(m.sigma), num(m.score),
                    m.changed_env ? "true" : "false", m.changed_act ? "true" : "false"});
  return csv::write(rows);
}

}  // namespace hhgen::controller
