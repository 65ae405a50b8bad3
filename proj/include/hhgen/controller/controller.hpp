#pragma once

#include <functional>
#include <string>
#include <vector>

#include "hhgen/activity/generator.hpp"
#include "hhgen/controller/influence.hpp"
#include "hhgen/controller/metrics.hpp"
#include "hhgen/env/generator.hpp"

namespace hhgen::controller {

using ActToEnvFn = std::function<ActToEnvResult(const ActivitySchedule&, const EnvironmentSchema&, int iteration)>;
using EnvToActFn = std::function<EnvToActResult(const EnvironmentSchema&, const ActivitySchedule&, int iteration)>;
using UserMetricFn = std::function<double(const EnvironmentSchema&, const ActivitySchedule&)>;

/// Collaborators of one controller run. The influence steps default to the
/// gateway-backed operations; tests may replace them.
struct ControllerDeps {
  llm::Gateway* gateway = nullptr;
  const env::AssetCatalog* catalog = nullptr;
  const embed::EmbeddingProvider* embed = nullptr;
  env::EnvGenOptions env_options;
  activity::ActivityOptions activity_options;
  ActToEnvFn act_to_env;
  EnvToActFn env_to_act;
  UserMetricFn user_metric;
};

struct Snapshot {
  EnvironmentSchema env;
  ActivitySchedule schedule;
  bool operator==(const Snapshot&) const = default;
};

struct RunResult {
  EnvironmentSchema env;
  ActivitySchedule schedule;
  std::vector<InteractionTranscript> transcripts;
  std::vector<IterationMetrics> history;
  std::vector<env::Unplaced> unplaced;
  std::vector<Unsatisfied> unsatisfied;
  std::vector<DroppedProposal> dropped;
  std::string stop_reason;  // "threshold", "max_iterations" or "fixpoint"
  std::vector<Snapshot> snapshots;  // the initial pair, then one per iteration
};

inline std::vector<std::string> controller_steps() { return {"initial_environment", "initial_activities", "refinement"}; }

/// Metrics of one iteration with the score filled in.
inline IterationMetrics measure(int i, const EnvironmentSchema& env, const ActivitySchedule& act, bool changed_env,
                                bool changed_act, const std::vector<Persona>& personas, const ConvergenceConfig& cfg,
                                const ControllerDeps& deps) {
  IterationMetrics m;
  m.i = i;
  m.rho = compute_density(env);
  m.gamma = compute_granularity(act);
  m.sigma = compute_semantic_similarity(env, act, *deps.embed, personas);
  m.user = deps.user_metric ? deps.user_metric(env, act) : 0.0;
  m.score = compute_score(m, cfg);
  m.changed_env = changed_env;
  m.changed_act = changed_act;
  return m;
}

/// The refinement loop from an initial pair: influence both ways, measure,
/// and stop at the threshold, the iteration cap or a fixpoint.
inline RunResult refine(EnvironmentSchema env, ActivitySchedule act, const std::vector<Persona>& personas,
                        const ConvergenceConfig& cfg, ControllerDeps& deps, InfluenceState& state) {
  cfg.validate();
  require(deps.embed != nullptr, "controller needs an embedding provider");
  if (!deps.act_to_env || !deps.env_to_act) {
    require(deps.gateway && deps.catalog, "default influence steps need a gateway and an asset catalog");
  }
  ActToEnvFn a2e = deps.act_to_env ? deps.act_to_env : ActToEnvFn([&](const ActivitySchedule& a, const EnvironmentSchema& e, int i) {
    state.seed = deps.env_options.seed + static_cast<std::uint64_t>(i) * 1000003ULL;
    return act_to_env_influence(a, e, personas, *deps.gateway, *deps.catalog, *deps.embed, state);
  });
  EnvToActFn e2a = deps.env_to_act ? deps.env_to_act : EnvToActFn([&](const EnvironmentSchema& e, const ActivitySchedule& a, int) {
    return env_to_act_influence(e, a, personas, *deps.gateway, *deps.embed, state);
  });

  RunResult out;
  out.snapshots.push_back({env, act});
  for (int i = 1; i <= cfg.max_iterations; ++i) {
    state.memory = llm::with_requirements(state.memory, "Refinement iteration " + std::to_string(i) + " of at most " +
                                                       std::to_string(cfg.max_iterations) + ".");
    auto e = a2e(act, env, i);
    auto a = e2a(e.env, act, i);
    out.unsatisfied.insert(out.unsatisfied.end(), e.unsatisfied.begin(), e.unsatisfied.end());
    out.dropped.insert(out.dropped.end(), a.dropped.begin(), a.dropped.end());
    require(e.env.objects.size() >= env.objects.size(), "influence removed objects");
    env = std::move(e.env);
    act = std::move(a.schedule);
    out.history.push_back(measure(i, env, act, e.changed, a.changed, personas, cfg, deps));
    out.snapshots.push_back({env, act});
    const auto& m = out.history.back();
    if (m.score >= cfg.theta) {
      out.stop_reason = "threshold";
      break;
    }
    if (!m.changed_env && !m.changed_act) {
      out.stop_reason = "fixpoint";
      break;
    }
    if (i == cfg.max_iterations) out.stop_reason = "max_iterations";
  }
  out.env = std::move(env);
  out.schedule = std::move(act);
  return out;
}

/// Full run: environment and activities are generated independently, then
/// refined against each other.
inline RunResult run(const std::vector<Persona>& personas, const EnvironmentConstraints& constraints,
                     const ConvergenceConfig& cfg, ControllerDeps deps) {
  cfg.validate();
  require(deps.gateway && deps.catalog && deps.embed, "controller needs a gateway, a catalog and an embedder");
  const auto gen = env::generate_environment(personas, constraints, *deps.gateway, *deps.catalog, *deps.embed,
                                             deps.env_options);
  const auto horizon = activity::generate_horizon(personas, nullptr, deps.activity_options, *deps.gateway);
  InfluenceState state;
  state.memory.task_description = "Refine a household environment and its residents' activities against each other.";
  state.memory.pipeline_steps = controller_steps();
  state.memory = llm::record_step(state.memory, "initial_environment",
                                  std::to_string(gen.env.rooms.size()) + " rooms, " +
                                      std::to_string(gen.env.objects.size()) + " objects");
  state.memory = llm::record_step(state.memory, "initial_activities",
                                  std::to_string(horizon.schedule.activities.size()) + " activities over " +
                                      std::to_string(deps.activity_options.days) + " days");
  auto out = refine(gen.env, horizon.schedule, personas, cfg, deps, state);
  out.transcripts = horizon.transcripts;
  out.unplaced = gen.unplaced;
  return out;
}

}  // namespace hhgen::controller
