#pragma once

// One day of activities in two model calls per stage: a household skeleton
// (wake, bedtime, meals and commitments) followed by one gap-filling call
// per member.

#include <map>
#include <set>
#include <string>
#include <vector>

#include "hhgen/activity/binding.hpp"
#include "hhgen/activity/window.hpp"
#include "hhgen/core/json.hpp"
#include "hhgen/core/validate.hpp"
#include "hhgen/llm/gateway.hpp"
#include "hhgen/llm/memory.hpp"

namespace hhgen::activity {

constexpr int kMaxConsistencyRepairs = 3;

struct DayPlan {
  std::string member;
  int wake = 420;
  int bedtime = 1380;
  std::vector<Activity> anchors;
};

/// Everything the per-day stages need besides the gateway.
struct DayContext {
  const std::vector<Persona>* personas = nullptr;
  const EnvironmentSchema* env = nullptr;  // null for environment-free generation
  int day = 0;
  const RollingWindow* window = nullptr;
  std::vector<Activity> prior;  // activities of earlier days
  std::vector<Activity> pins;   // user-pinned activities for this day
  ContextualMemory memory;
};

inline std::string weekday_name(int day) {
  static const char* names[] = {"Monday", "Tuesday", "Wednesday", "Thursday", "Friday", "Saturday", "Sunday"};
  return names[day % 7];
}

inline json persona_json(const Persona& p) {
  return {{"id", p.id},
          {"name", p.name},
          {"age", p.age},
          {"occupation", p.occupation},
          {"works_from_home", p.works_from_home},
          {"sleep_habit", p.sleep_habit},
          {"hobbies", p.hobbies},
          {"free_text", p.free_text}};
}

inline json interval_json(const Activity& a) {
  return {{"label", a.label}, {"start", format_hhmm(a.start)}, {"end", format_hhmm(a.end())}};
}

inline std::vector<Activity> pins_of(const std::vector<Activity>& pins, const std::string& member) {
  std::vector<Activity> out;
  for (const auto& p : pins)
    if (p.member == member) out.push_back(p);
  return out;
}

inline std::vector<TimeWindow> intervals(const std::vector<Activity>& acts) {
  std::vector<TimeWindow> out;
  for (const auto& a : acts) out.push_back({a.start, a.end()});
  return out;
}

/// Labels worth offering to the fill stage: hobbies first, then in-home
/// lexicon entries the environment can host (all of them without one).
inline std::vector<std::string> fill_options(const Persona& p, const EnvironmentSchema* env) {
  std::vector<std::string> out;
  auto add = [&](const std::string& l) {
    if (std::find(out.begin(), out.end(), l) == out.end()) out.push_back(l);
  };
  for (const auto& h : p.hobbies) add(hobby_label(h));
  const bool student = p.age < 18 || contains_phrase(p.occupation, "student");
  for (const auto& k : lexicon()) {
    if (k.offsite || k.label == "sleep" || is_meal(k.label) || k.label == "work") continue;
    if (k.label == "homework" && !student) continue;
    if (k.label == "coffee" && p.age < 16) continue;
    if (env) {
      Activity probe{p.id, k.label, "", 0, 0, 1, std::string(kUnbound), {}, false};
      const auto b = bind_activity(probe, *env, nullptr);
      if (b.room == kUnbound || b.missing_objects) continue;
    }
    add(k.label);
  }
  return out;
}

inline json environment_brief(const EnvironmentSchema& env) {
  json rooms = json::array();
  for (const auto& r : env.rooms) {
    json objects = json::array();
    for (const auto& o : env.objects)
      if (o.room == r.id)
        if (const auto* a = env.find_asset(o.asset)) objects.push_back(a->description);
    rooms.push_back({{"id", r.id}, {"label", r.label}, {"function", r.function}, {"objects", objects}});
  }
  return rooms;
}

// ---------------------------------------------------------------------------
// Stage 1: household skeleton.

inline json skeleton_schema() {
  return json::parse(R"({
    "type": "object", "required": ["members"],
    "properties": {"members": {"type": "array", "minItems": 1, "items": {
      "type": "object", "required": ["member", "wake", "bedtime", "anchors"],
      "properties": {
        "member": {"type": "string"},
        "wake": {"type": "string", "format": "hh:mm"},
        "bedtime": {"type": "string", "format": "hh:mm"},
        "anchors": {"type": "array", "items": {
          "type": "object", "required": ["label", "start", "duration"],
          "properties": {
            "label": {"type": "string", "minLength": 1},
            "start": {"type": "string", "format": "hh:mm"},
            "duration": {"type": "integer", "minimum": 1, "maximum": 720}}}}}}}}})");
}

/// Wake and bedtime after the hard rules: never before the previous
/// night's minimum sleep allows, never after noon, bedtime no later than
/// the sleep habit allows, around every pin.
inline std::pair<int, int> clamp_day(const Persona& p, int wake, int bedtime, int earliest,
                                     const std::vector<Activity>& pins) {
  const auto sw = sleep_windows(p.sleep_habit);
  wake = std::clamp(wake, earliest, 720);
  bedtime = std::min(bedtime, sw.bedtime.end);
  for (const auto& pin : pins) {
    wake = std::min(wake, pin.start);
    bedtime = std::max(bedtime, pin.end());
  }
  bedtime = std::min(std::max(bedtime, wake + 240), kMinutesPerDay - 1);
  return {wake, bedtime};
}

inline std::vector<DayPlan> parse_skeleton(const json& reply, const DayContext& ctx) {
  std::vector<DayPlan> plans;
  for (const auto& p : *ctx.personas) {
    for (const auto& m : reply.at("members")) {
      if (m.at("member") != p.id) continue;
      DayPlan plan;
      plan.member = p.id;
      const auto pins = pins_of(ctx.pins, p.id);
      std::tie(plan.wake, plan.bedtime) =
          clamp_day(p, *parse_hhmm(m.at("wake").get<std::string>()), *parse_hhmm(m.at("bedtime").get<std::string>()),
                    earliest_wake(ctx.prior, p.id, ctx.day), pins);
      for (const auto& a : m.at("anchors")) {
        Activity act;
        act.member = p.id;
        act.day = ctx.day;
        act.label = to_lower(trim(a.at("label").get<std::string>()));
        act.start = *parse_hhmm(a.at("start").get<std::string>());
        act.duration = a.at("duration").get<int>();
        plan.anchors.push_back(std::move(act));
      }
      plans.push_back(std::move(plan));
      break;
    }
  }
  return plans;
}

/// Problems with a skeleton reply, phrased for the model; nullopt if fine.
inline std::optional<std::string> skeleton_problems(const json& reply, const DayContext& ctx) {
  std::map<std::string, int> seen;
  for (const auto& m : reply.at("members")) ++seen[m.at("member").get<std::string>()];
  for (const auto& p : *ctx.personas)
    if (seen[p.id] != 1) return "member " + p.id + " must appear exactly once";
  if (seen.size() != ctx.personas->size()) return "only household members may appear";
  for (const auto& plan : parse_skeleton(reply, ctx)) {
    bool meal = false;
    std::vector<Activity> placed = pins_of(ctx.pins, plan.member);
    for (const auto& a : plan.anchors) {
      if (a.label == "sleep") return "sleep is given by bedtime, not as an anchor";
      if (a.start < plan.wake || a.end() > plan.bedtime)
        return plan.member + " " + a.label + " " + format_hhmm(a.start) + " lies outside " + format_hhmm(plan.wake) +
               "-" + format_hhmm(plan.bedtime);
      for (const auto& b : placed)
        if (a.start < b.end() && b.start < a.end())
          return plan.member + " " + a.label + " overlaps " + b.label + " at " + format_hhmm(b.start);
      meal = meal || is_meal(a.label);
      placed.push_back(a);
    }
    if (!meal) return plan.member + " needs at least one meal";
  }
  return std::nullopt;
}

inline std::vector<DayPlan> generate_skeleton(const DayContext& ctx, llm::Gateway& gw) {
  if (!gw.schemas().has("day_skeleton")) gw.schemas().add("day_skeleton", skeleton_schema());
  json members = json::array();
  for (const auto& p : *ctx.personas) {
    const auto sw = sleep_windows(p.sleep_habit);
    json pins = json::array();
    for (const auto& pin : pins_of(ctx.pins, p.id)) pins.push_back(interval_json(pin));
    members.push_back({{"persona", persona_json(p)},
                       {"earliest_wake", format_hhmm(earliest_wake(ctx.prior, p.id, ctx.day))},
                       {"usual_wake", {format_hhmm(sw.wake.start), format_hhmm(sw.wake.end)}},
                       {"usual_bedtime", {format_hhmm(sw.bedtime.start), format_hhmm(sw.bedtime.end)}},
                       {"carryover", ctx.window ? ctx.window->carryover.count(p.id) ? ctx.window->carryover.at(p.id) : ""
                                                : ""},
                       {"pinned", pins}});
  }
  const json input{{"day", ctx.day},
                   {"weekday", weekday_name(ctx.day)},
                   {"members", members},
                   {"recent", make_window_context(ctx.prior, ctx.window ? ctx.window->size : 0)}};
  const auto prompt = llm::render_task_prompt(
      llm::build_context_preamble(ctx.memory), "day_skeleton",
      "Plan the skeleton of this day for every household member: wake time, bedtime, meals and fixed commitments "
      "such as work or school. Anchors must not overlap each other or pinned activities and must lie between wake "
      "and bedtime. Sleep itself is implied by the bedtime.",
      input);
  const json reply = gw.generate_structured(prompt, "day_skeleton", gw.defaults(), {"hri", "day_skeleton"},
                                            llm::kDefaultMaxRepairs,
                                            [&](const json& v) { return skeleton_problems(v, ctx); });
  return parse_skeleton(reply, ctx);
}

inline json template_day_skeleton(const json& input, Rng& rng) {
  const int day = input.value("day", 0);
  const bool weekday = day % 7 < 5;
  json members = json::array();
  for (const auto& m : input.at("members")) {
    const auto& p = m.at("persona");
    const auto habit = p.at("sleep_habit").get<SleepHabit>();
    const auto sw = sleep_windows(habit);
    const int earliest = parse_hhmm(m.value("earliest_wake", std::string("00:00"))).value_or(0);
    std::vector<TimeWindow> busy;
    for (const auto& pin : m.value("pinned", json::array()))
      busy.push_back({*parse_hhmm(pin.at("start").get<std::string>()), *parse_hhmm(pin.at("end").get<std::string>())});
    int wake = std::max(earliest, snap5(rng.between(sw.wake.start, sw.wake.end)));
    int bedtime = snap5(rng.between(sw.bedtime.start, sw.bedtime.end));
    for (const auto& b : busy) {
      wake = std::min(wake, b.start);
      bedtime = std::max(bedtime, b.end);
    }
    json anchors = json::array();
    auto place = [&](const std::string& label, int preferred, int duration, int slack = 120) {
      if (auto s = first_fit(snap5(preferred), duration, busy, wake, bedtime, slack)) {
        anchors.push_back({{"label", label}, {"start", format_hhmm(*s)}, {"duration", duration}});
        busy.push_back({*s, *s + duration});
      }
    };
    const std::string occupation = to_lower(p.value("occupation", std::string{}));
    const bool student = p.value("age", 30) < 18 || contains_phrase(occupation, "student");
    const bool wfh = p.value("works_from_home", false);
    const bool worker = !student && !occupation.empty() && !contains_phrase(occupation, "retired");
    place("breakfast", wake + rng.between(10, 30), 25, 240);
    if (weekday && student) place("school", std::max(480, wake + 45), 390, 180);
    if (weekday && worker && !wfh) place("away at work", std::max(510, wake + 60), 480, 240);
    if (weekday && worker && wfh) {
      place("work", std::max(540, wake + 60), 180);
      place("work", 810, 180);
    }
    place("lunch", 750 + 5 * rng.between(-6, 6), 40);
    place("dinner", 1110 + 5 * rng.between(-6, 6), 45);
    members.push_back({{"member", p.at("id")},
                       {"wake", format_hhmm(wake)},
                       {"bedtime", format_hhmm(bedtime)},
                       {"anchors", anchors}});
  }
  return {{"members", members}};
}

// ---------------------------------------------------------------------------
// Stage 2: per-member gap filling with conflict repair.

inline json fill_schema() {
  return json::parse(R"({
    "type": "object", "required": ["activities"],
    "properties": {"activities": {"type": "array", "items": {
      "type": "object", "required": ["label", "start", "duration"],
      "properties": {
        "label": {"type": "string", "minLength": 1},
        "start": {"type": "string", "format": "hh:mm"},
        "duration": {"type": "integer", "minimum": 1, "maximum": 720}}}}}})");
}

struct FillResult {
  std::vector<Activity> activities;  // fixed intervals plus accepted fill, sorted
  std::vector<Activity> filtered;    // proposals outside the waking window
  int attempts = 0;
};

inline Activity sleep_activity(const DayPlan& plan, int day) {
  Activity s;
  s.member = plan.member;
  s.label = "sleep";
  s.day = day;
  s.start = plan.bedtime;
  s.duration = kMinutesPerDay - plan.bedtime;
  return s;
}

/// Conflicts (overlaps and malformed intervals) between a member's fixed
/// intervals and a proposed fill; proposals outside [wake, bedtime) and
/// extra sleep entries are filtered out instead.
inline std::vector<std::string> fill_conflicts(const std::vector<Activity>& fixed, std::vector<Activity>& proposal,
                                               const DayPlan& plan, std::vector<Activity>& filtered) {
  std::vector<Activity> kept;
  for (auto& a : proposal) {
    if (a.label == "sleep" || a.start < plan.wake || a.end() > plan.bedtime) filtered.push_back(a);
    else kept.push_back(a);
  }
  proposal = kept;
  ActivitySchedule probe;
  probe.horizon_days = fixed.empty() ? 1 : fixed.front().day + 1;
  probe.activities = fixed;
  probe.activities.insert(probe.activities.end(), kept.begin(), kept.end());
  std::vector<std::string> out;
  for (const auto& v : validate_schedule_temporal(probe)) out.push_back(v.detail);
  return out;
}

inline FillResult fill_member_day(const Persona& p, const DayPlan& plan, const DayContext& ctx, llm::Gateway& gw,
                                  int max_repairs = kMaxConsistencyRepairs) {
  if (!gw.schemas().has("day_fill")) gw.schemas().add("day_fill", fill_schema());
  std::vector<Activity> fixed = plan.anchors;
  for (const auto& pin : pins_of(ctx.pins, p.id)) fixed.push_back(pin);
  fixed.push_back(sleep_activity(plan, ctx.day));
  std::stable_sort(fixed.begin(), fixed.end(), schedule_order);

  json fixed_json = json::array();
  for (const auto& a : fixed) fixed_json.push_back(interval_json(a));
  json input{{"persona", persona_json(p)},
             {"day", ctx.day},
             {"weekday", weekday_name(ctx.day)},
             {"wake", format_hhmm(plan.wake)},
             {"bedtime", format_hhmm(plan.bedtime)},
             {"fixed", fixed_json},
             {"options", fill_options(p, ctx.env)},
             {"recent", make_window_context(ctx.prior, ctx.window ? ctx.window->size : 0)},
             {"carryover", ctx.window && ctx.window->carryover.count(p.id) ? ctx.window->carryover.at(p.id) : ""}};
  if (ctx.env) input["rooms"] = environment_brief(*ctx.env);
  const auto base = llm::render_task_prompt(
      llm::build_context_preamble(ctx.memory), "day_fill",
      "Fill the free time between wake and bedtime with this member's activities. Do not overlap the fixed "
      "intervals or each other.",
      input);

  FillResult res;
  std::string prompt = base;
  for (int attempt = 0; attempt <= max_repairs; ++attempt) {
    res.attempts = attempt + 1;
    const json reply = gw.generate_structured(prompt, "day_fill", gw.defaults(), {"hri", "day_fill"});
    std::vector<Activity> proposal;
    for (const auto& a : reply.at("activities")) {
      Activity act;
      act.member = p.id;
      act.day = ctx.day;
      act.label = to_lower(trim(a.at("label").get<std::string>()));
      act.start = *parse_hhmm(a.at("start").get<std::string>());
      act.duration = a.at("duration").get<int>();
      proposal.push_back(std::move(act));
    }
    std::vector<Activity> filtered;
    const auto conflicts = fill_conflicts(fixed, proposal, plan, filtered);
    if (conflicts.empty()) {
      res.activities = fixed;
      res.activities.insert(res.activities.end(), proposal.begin(), proposal.end());
      std::stable_sort(res.activities.begin(), res.activities.end(), schedule_order);
      res.filtered = std::move(filtered);
      return res;
    }
    prompt = base + "### CONFLICTS\n";
    for (const auto& c : conflicts) prompt += "- " + c + "\n";
    prompt += "Move or shorten the conflicting activities and reply again.\n";
  }
  fail(ErrorCode::consistency_failure, p.id + " day " + std::to_string(ctx.day) + " still conflicts after " +
                                           std::to_string(max_repairs) + " repair attempts");
}

inline json template_day_fill(const json& input, Rng& rng) {
  const int wake = *parse_hhmm(input.at("wake").get<std::string>());
  const int bedtime = *parse_hhmm(input.at("bedtime").get<std::string>());
  std::vector<TimeWindow> busy;
  for (const auto& f : input.at("fixed"))
    busy.push_back({*parse_hhmm(f.at("start").get<std::string>()), *parse_hhmm(f.at("end").get<std::string>())});
  std::vector<std::string> options = input.value("options", std::vector<std::string>{});
  std::set<std::string> hobbies;
  for (const auto& h : input.at("persona").value("hobbies", std::vector<std::string>{})) hobbies.insert(hobby_label(h));

  json out = json::array();
  std::map<std::string, int> used;
  std::string last;
  auto emit = [&](const std::string& label, int start, int duration) {
    out.push_back({{"label", label}, {"start", format_hhmm(start)}, {"duration", duration}});
    busy.push_back({start, start + duration});
    ++used[label];
    last = label;
  };
  if (std::find(options.begin(), options.end(), "shower") != options.end())
    if (auto s = first_fit(wake, 15, busy, wake, bedtime, 60)) emit("shower", *s, 15);

  for (const auto& gap : free_gaps(busy, wake, bedtime)) {
    int t = gap.start + 5 * rng.between(0, 2);
    while (gap.end - t >= 15 && !options.empty()) {
      // Prefer labels whose usual window covers t; hobbies count double.
      std::vector<std::string> pool;
      for (const auto& l : options) {
        const auto* k = find_kind(l);
        const bool in_window = !k || (k->window.start <= t && t < k->window.end);
        const int limit = hobbies.count(l) ? 2 : 1;
        if (!in_window || used[l] >= limit || l == last) continue;
        pool.push_back(l);
        if (hobbies.count(l)) pool.push_back(l);
      }
      if (pool.empty()) {
        t += 30;
        continue;
      }
      const std::string label = rng.pick(pool);
      const auto* k = find_kind(label);
      const int typical = k ? k->duration : 60;
      const int want = std::max(10, snap5(static_cast<int>(typical * rng.uniform(0.75, 1.25))));
      const int dur = std::min(want, gap.end - t);
      if (dur < 10) break;
      emit(label, t, dur);
      t += dur + 5 * rng.between(0, 3);
    }
  }
  return {{"activities", out}};
}

}  // namespace hhgen::activity
