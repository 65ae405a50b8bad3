#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hhgen/activity/interactions.hpp"
#include "hhgen/llm/stub.hpp"

namespace hhgen::activity {

struct ActivityOptions {
  int days = 1;
  int window = 12;  // trailing activities shown to the model
  BindingMode mode = BindingMode::lenient;
  std::optional<RobotProfile> robot;
  std::vector<Activity> pins;  // user-authored activities scheduled verbatim
  int max_repairs = kMaxConsistencyRepairs;
};

struct DayFragment {
  std::vector<Activity> activities;
  std::vector<Activity> filtered;  // proposals outside a member's waking window
  std::vector<Activity> dropped;   // strict mode: activities the home cannot host
};

struct Horizon {
  ActivitySchedule schedule;
  std::vector<InteractionTranscript> transcripts;
  std::vector<Activity> filtered;
  std::vector<Activity> dropped;
};

inline void check_options(const std::vector<Persona>& personas, const ActivityOptions& opts) {
  require(!personas.empty(), "activity generation needs at least one persona");
  require(opts.days >= 1, "days must be at least 1");
  require(opts.window >= 0, "window size must be non-negative");
  if (opts.robot) require(!opts.robot->capabilities.empty(), "robot needs at least one capability");
  ActivitySchedule pins;
  pins.horizon_days = opts.days;
  pins.activities = opts.pins;
  for (const auto& p : opts.pins) {
    require(std::any_of(personas.begin(), personas.end(), [&](const Persona& x) { return x.id == p.member; }),
            "pin for unknown member '" + p.member + "'");
    require(p.label != "sleep", "sleep cannot be pinned");
  }
  const auto problems = validate_schedule_temporal(pins);
  if (!problems.empty()) fail(ErrorCode::precondition, "invalid pins: " + to_string(problems.front()));
}

inline const std::vector<std::string>& day_steps() {
  static const std::vector<std::string> steps = {"skeleton", "fill", "robot", "summary"};
  return steps;
}

/// Skeleton, per-member fill, room binding (when an environment is given),
/// robot assignment and the carryover summary for one day.
inline DayFragment generate_day_schedule(const std::vector<Persona>& personas, const EnvironmentSchema* env, int day,
                                         RollingWindow& window, const std::vector<Activity>& prior,
                                         const ActivityOptions& opts, llm::Gateway& gw,
                                         const embed::EmbeddingProvider* embed = nullptr) {
  require(day >= 0, "day must be non-negative");
  DayContext ctx;
  ctx.personas = &personas;
  ctx.env = env;
  ctx.day = day;
  ctx.window = &window;
  ctx.prior = prior;
  for (const auto& p : opts.pins)
    if (p.day == day) ctx.pins.push_back(p);
  ctx.memory.task_description = "Plan " + weekday_name(day) + " (day " + std::to_string(day) + ") for a household of " +
                                std::to_string(personas.size()) + ".";
  ctx.memory.pipeline_steps = day_steps();

  DayFragment frag;
  ctx.memory.current_requirements = "Every member wakes, eats at least once and goes to bed.";
  const auto plans = generate_skeleton(ctx, gw);
  ctx.memory = llm::record_step(ctx.memory, "skeleton", "wake, meals and commitments set");

  ctx.memory.current_requirements = "No overlaps; everything between wake and bedtime.";
  for (std::size_t i = 0; i < personas.size(); ++i) {
    auto res = fill_member_day(personas[i], plans[i], ctx, gw, opts.max_repairs);
    frag.activities.insert(frag.activities.end(), res.activities.begin(), res.activities.end());
    frag.filtered.insert(frag.filtered.end(), res.filtered.begin(), res.filtered.end());
  }
  ctx.memory = llm::record_step(ctx.memory, "fill", std::to_string(frag.activities.size()) + " activities");

  if (env) {
    ActivitySchedule s;
    s.horizon_days = day + 1;
    s.activities = std::move(frag.activities);
    auto rep = bind_schedule(s, *env, embed, opts.mode);
    frag.activities = std::move(rep.schedule.activities);
    frag.dropped = std::move(rep.dropped);
  } else {
    for (auto& a : frag.activities) a.description = activity_description(a, nullptr);
  }

  if (opts.robot) assign_robot(frag.activities, *opts.robot, ctx.memory, gw);
  ctx.memory = llm::record_step(ctx.memory, "robot", "robot assignments made");

  window.carryover = summarize_day(frag.activities, personas, day, ctx.memory, gw);
  std::stable_sort(frag.activities.begin(), frag.activities.end(), schedule_order);
  return frag;
}

inline Horizon generate_horizon(const std::vector<Persona>& personas, const EnvironmentSchema* env,
                                const ActivityOptions& opts, llm::Gateway& gw,
                                const embed::EmbeddingProvider* embed = nullptr, bool with_transcripts = true) {
  check_options(personas, opts);
  Horizon h;
  RollingWindow window{opts.window, {}};
  std::vector<Activity> prior;
  for (int day = 0; day < opts.days; ++day) {
    auto frag = generate_day_schedule(personas, env, day, window, prior, opts, gw, embed);
    prior.insert(prior.end(), frag.activities.begin(), frag.activities.end());
    h.filtered.insert(h.filtered.end(), frag.filtered.begin(), frag.filtered.end());
    h.dropped.insert(h.dropped.end(), frag.dropped.begin(), frag.dropped.end());
  }
  h.schedule.horizon_days = opts.days;
  h.schedule.activities = std::move(prior);
  h.schedule = normalized(std::move(h.schedule));
  const auto problems = env ? validate_schedule(h.schedule, *env) : validate_schedule_temporal(h.schedule);
  if (!problems.empty()) fail(ErrorCode::consistency_failure, "generated schedule is invalid: " + to_string(problems.front()));
  if (opts.robot && with_transcripts) h.transcripts = synthesize_interactions(h.schedule, personas, *opts.robot, gw);
  return h;
}

/// Environment-free initial schedule: every in-home activity stays unbound.
inline ActivitySchedule generate_activities(const std::vector<Persona>& personas, llm::Gateway& gw,
                                           const ActivityOptions& opts = {}) {
  return generate_horizon(personas, nullptr, opts, gw, nullptr, false).schedule;
}

inline void register_activity_templates(llm::TemplateProvider& stub) {
  stub.on("day_skeleton", template_day_skeleton);
  stub.on("day_fill", template_day_fill);
  stub.on("robot_tasks", template_robot_tasks);
  stub.on("day_summary", template_day_summary);
  stub.on("interactions", template_interactions);
}

}  // namespace hhgen::activity
