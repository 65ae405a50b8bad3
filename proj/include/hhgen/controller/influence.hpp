#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "hhgen/activity/binding.hpp"
#include "hhgen/activity/window.hpp"
#include "hhgen/env/assets.hpp"
#include "hhgen/env/placement.hpp"
#include "hhgen/env/program.hpp"
#include "hhgen/env/repair.hpp"
#include "hhgen/llm/memory.hpp"
#include "hhgen/llm/stub.hpp"

namespace hhgen::controller {

constexpr std::size_t kMaxAssetCandidates = 4;
constexpr int kDefaultProposalMinutes = 30;

/// What the influence steps remember across iterations so that the loop
/// reaches a fixpoint: needs already attempted and objects already offered.
struct InfluenceState {
  std::set<std::string> attempted_needs;
  std::set<std::string> offered_objects;
  std::uint64_t seed = 0;
  ContextualMemory memory;
};

struct Unsatisfied {
  std::string label;
  std::string room;  // target room id, or empty when none exists
  std::string reason;
  bool operator==(const Unsatisfied&) const = default;
};

struct ActToEnvResult {
  EnvironmentSchema env;
  bool changed = false;
  std::vector<std::string> added;  // new object and room ids
  std::vector<Unsatisfied> unsatisfied;
};

struct DroppedProposal {
  std::string member;
  std::string label;
  std::string object;
  std::string reason;
  bool operator==(const DroppedProposal&) const = default;
};

struct EnvToActResult {
  ActivitySchedule schedule;
  bool changed = false;
  std::vector<Activity> inserted;
  std::vector<DroppedProposal> dropped;
};

// ---------------------------------------------------------------------------
// Activities shape the environment.

struct AssetNeed {
  std::string label;
  std::string member;
  std::string room;  // empty: a hobby room has to be added first
  std::vector<AssetRecord> candidates;

  std::string key() const { return label + "@" + (room.empty() ? "new hobby room" : room); }
};

namespace detail {

inline bool foreign_bedroom(const Room& r, const std::string& member) {
  return r.function == RoomFunction::sleeping && r.owner && *r.owner != member;
}

/// Room an unmet activity should be furnished in: its bound room when only
/// objects are missing, else the first room of a preferred function.
inline std::optional<std::string> target_room(const Activity& a, const activity::Binding& b,
                                              const EnvironmentSchema& env) {
  if (b.missing_objects) return b.room;
  std::vector<RoomFunction> prefs;
  if (const auto* kind = activity::find_kind(a.label)) prefs = kind->rooms;
  else prefs = {RoomFunction::hobby, RoomFunction::other, RoomFunction::living};
  for (auto f : prefs) {
    for (const auto& r : env.rooms)
      if (r.function == f && r.owner && *r.owner == a.member) return r.id;
    for (const auto& r : env.rooms)
      if (r.function == f && !foreign_bedroom(r, a.member)) return r.id;
  }
  if (std::find(prefs.begin(), prefs.end(), RoomFunction::hobby) != prefs.end()) return std::string{};
  return std::nullopt;
}

/// Catalog records that would let the activity bind: keyword matches for
/// lexicon labels, otherwise the records most similar to the label.
inline std::vector<AssetRecord> need_candidates(const std::string& label, const env::AssetCatalog& catalog,
                                                const embed::EmbeddingProvider& embed) {
  std::vector<std::pair<double, AssetRecord>> scored;
  const auto q = embed.embed_text(label);
  const auto* kind = activity::find_kind(label);
  for (const auto& r : catalog.records()) {
    const double s = stats::cosine(q, embed.embed_text(r.description));
    if (kind ? activity::supports(*kind, r.description) : s > activity::kUnknownLabelMatch) scored.emplace_back(s, r);
  }
  std::stable_sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second.id < b.second.id;
  });
  std::vector<AssetRecord> out;
  for (auto& [_, r] : scored) {
    if (out.size() >= kMaxAssetCandidates) break;
    out.push_back(std::move(r));
  }
  return out;
}

inline std::string next_room_id(const EnvironmentSchema& env) {
  long best = -1;
  for (const auto& r : env.rooms)
    if (r.id.size() > 1 && r.id[0] == 'r' && std::all_of(r.id.begin() + 1, r.id.end(), ::isdigit))
      best = std::max(best, std::stol(r.id.substr(1)));
  return "r" + std::to_string(best + 1);
}

/// Adds a default-sized hobby room in free space touching the house.
inline std::optional<EnvironmentSchema> with_hobby_room(const EnvironmentSchema& env, std::string& room_id) {
  const double side = std::sqrt(env::default_area(RoomFunction::hobby));
  for (double s = side; s >= env::kMinRoomSide - kGeomEps; s -= kGrid) {
    const double w = snap(s);
    const auto spot = env::find_free_spot(env.rooms, env.bounds, w, w);
    if (!spot) continue;
    EnvironmentSchema out = env;
    room_id = next_room_id(env);
    out.rooms.push_back({room_id, "hobby room", RoomFunction::hobby, *spot, std::nullopt});
    try {
      out = env::ensure_connectivity(std::move(out));
    } catch (const Error&) {
      continue;
    }
    if (validate_environment(with_description(out)).empty()) return out;
  }
  return std::nullopt;
}

}  // namespace detail

/// Unmet in-home activities of a schedule against an environment, one need
/// per (label, target room). Needs already attempted are skipped.
inline std::vector<AssetNeed> collect_needs(const ActivitySchedule& act, const EnvironmentSchema& env,
                                            const env::AssetCatalog& catalog, const embed::EmbeddingProvider& embed,
                                            const InfluenceState& state, std::vector<Unsatisfied>& unsatisfied) {
  std::vector<AssetNeed> needs;
  std::set<std::string> seen;
  for (const auto& a : act.activities) {
    if (activity::is_offsite(a.label)) continue;
    const auto b = activity::bind_activity(a, env, &embed);
    if (b.room != kUnbound && !b.missing_objects) continue;
    const auto room = detail::target_room(a, b, env);
    AssetNeed need{a.label, a.member, room.value_or(""), {}};
    if (!seen.insert(need.key()).second || state.attempted_needs.count(need.key())) continue;
    if (!room) {
      unsatisfied.push_back({a.label, "", "no room of a suitable function"});
      continue;
    }
    need.candidates = detail::need_candidates(a.label, catalog, embed);
    if (need.candidates.empty()) {
      unsatisfied.push_back({a.label, need.room, "no catalog asset supports it"});
      continue;
    }
    needs.push_back(std::move(need));
  }
  return needs;
}

inline json asset_selection_schema() {
  return json::parse(R"({
    "type": "object", "required": ["selections"],
    "properties": {"selections": {"type": "array", "items": {
      "type": "object", "required": ["need", "asset"],
      "properties": {"need": {"type": "integer", "minimum": 0}, "asset": {"type": "string"}}}}}})");
}

inline json template_asset_selection(const json& input, Rng&) {
  json out = json::array();
  for (const auto& n : input.at("needs"))
    if (!n.at("candidates").empty()) out.push_back({{"need", n.at("index")}, {"asset", n.at("candidates")[0].at("id")}});
  return {{"selections", out}};
}

/// Furnishes the environment for activities it cannot host yet. One model
/// call chooses an asset per need among keyword or similarity candidates;
/// a hobby room is added when the activity needs one and space allows.
inline ActToEnvResult act_to_env_influence(const ActivitySchedule& act, const EnvironmentSchema& env0,
                                           const std::vector<Persona>& personas, llm::Gateway& gw,
                                           const env::AssetCatalog& catalog, const embed::EmbeddingProvider& embed,
                                           InfluenceState& state) {
  require(validate_environment(env0).empty(), "environment must be valid before influence");
  ActToEnvResult res{env0, false, {}, {}};
  auto needs = collect_needs(act, env0, catalog, embed, state, res.unsatisfied);
  if (needs.empty()) return res;

  if (!gw.schemas().has("asset_selection")) gw.schemas().add("asset_selection", asset_selection_schema());
  json input_needs = json::array();
  for (std::size_t i = 0; i < needs.size(); ++i) {
    const Room* room = env0.find_room(needs[i].room);
    json cands = json::array();
    for (const auto& c : needs[i].candidates) cands.push_back({{"id", c.id}, {"description", c.description}});
    input_needs.push_back({{"index", i},
                           {"activity", needs[i].label},
                           {"member", needs[i].member},
                           {"room", room ? room->label : "new hobby room"},
                           {"candidates", cands}});
  }
  json members = json::array();
  for (const auto& p : personas) members.push_back({{"id", p.id}, {"free_text", p.free_text}});
  const std::string prompt = llm::render_task_prompt(
      llm::build_context_preamble(state.memory), "asset_selection",
      "For each activity the home cannot host yet, pick one candidate asset to add, or an empty string to add none.",
      {{"needs", input_needs}, {"members", members}});
  const json reply = gw.generate_structured(
      prompt, "asset_selection", gw.defaults(), {"controller", "asset_selection"}, llm::kDefaultMaxRepairs,
      [&](const json& v) -> std::optional<std::string> {
        for (const auto& s : v.at("selections")) {
          const auto idx = s.at("need").get<std::size_t>();
          if (idx >= needs.size()) return "need " + std::to_string(idx) + " does not exist";
          const auto id = s.at("asset").get<std::string>();
          if (id.empty()) continue;
          const auto& c = needs[idx].candidates;
          if (std::none_of(c.begin(), c.end(), [&](const AssetRecord& r) { return r.id == id; }))
            return "asset '" + id + "' is not a candidate for need " + std::to_string(idx);
        }
        return std::nullopt;
      });

  std::map<std::size_t, std::string> chosen;
  for (const auto& s : reply.at("selections")) chosen.emplace(s.at("need").get<std::size_t>(), s.at("asset").get<std::string>());
  std::optional<std::string> hobby_room;
  for (std::size_t i = 0; i < needs.size(); ++i) {
    auto& need = needs[i];
    state.attempted_needs.insert(need.key());
    auto it = chosen.find(i);
    if (it == chosen.end() || it->second.empty()) {
      res.unsatisfied.push_back({need.label, need.room, "no asset selected"});
      continue;
    }
    Activity probe;
    probe.member = need.member;
    probe.label = need.label;
    const auto now = activity::bind_activity(probe, res.env, &embed);
    if (now.room != kUnbound && !now.missing_objects) continue;  // an earlier addition already serves it
    EnvironmentSchema next = res.env;
    std::vector<std::string> added;
    if (need.room.empty()) {
      if (!hobby_room) {
        std::string rid;
        auto grown = detail::with_hobby_room(res.env, rid);
        if (!grown) {
          res.unsatisfied.push_back({need.label, "", "no space for a hobby room"});
          continue;
        }
        next = std::move(*grown);
        hobby_room = rid;
        added.push_back(rid);
      }
      need.room = *hobby_room;
    }
    auto placed = env::place_objects(next, {{need.room, {*catalog.find(it->second)}}}, state.seed + i);
    if (placed.placed.empty()) {
      res.unsatisfied.push_back({need.label, need.room, placed.unplaced.empty() ? "not placed" : placed.unplaced.front().reason});
      continue;
    }
    added.insert(added.end(), placed.placed.begin(), placed.placed.end());
    res.env = std::move(placed.env);
    res.added.insert(res.added.end(), added.begin(), added.end());
  }
  res.env = with_description(std::move(res.env));
  res.changed = !res.added.empty();
  if (!res.changed) res.env = env0;
  if (const auto v = validate_environment(res.env); !v.empty())
    fail(ErrorCode::unrepairable, "influence produced an invalid environment: " + to_string(v.front()));
  return res;
}

// ---------------------------------------------------------------------------
// The environment shapes activities.

struct Affordance {
  std::string object;
  std::string description;
  std::string room;
  std::vector<std::string> labels;
};

/// Objects no activity uses that afford a lexicon activity, skipping those
/// already offered to the model.
inline std::vector<Affordance> unused_affordances(const EnvironmentSchema& env, const ActivitySchedule& act,
                                                  const InfluenceState& state) {
  std::set<std::string> used;
  for (const auto& a : act.activities) used.insert(a.objects.begin(), a.objects.end());
  std::vector<Affordance> out;
  for (const auto& o : env.objects) {
    if (used.count(o.id) || state.offered_objects.count(o.id)) continue;
    const AssetRecord* asset = env.find_asset(o.asset);
    if (!asset) continue;
    Affordance af{o.id, asset->description, o.room, {}};
    for (const auto& k : activity::lexicon())
      if (k.afforded && activity::supports(k, asset->description)) af.labels.push_back(k.label);
    if (!af.labels.empty()) out.push_back(std::move(af));
  }
  return out;
}

/// Member's waking span on a day: first activity start to sleep start.
inline std::optional<TimeWindow> waking_span(const ActivitySchedule& act, const std::string& member, int day) {
  int wake = kMinutesPerDay, bed = kMinutesPerDay;
  bool any = false;
  for (const auto& a : act.activities) {
    if (a.member != member || a.day != day) continue;
    any = true;
    if (a.label == "sleep") bed = std::min(bed, a.start);
    else wake = std::min(wake, a.start);
  }
  if (!any || wake >= bed) return std::nullopt;
  return TimeWindow{wake, bed};
}

/// Earliest (day, start) on the 5-minute grid where the member is free for
/// `duration` minutes inside both the waking span and `window`.
inline std::optional<std::pair<int, int>> find_free_slot(const ActivitySchedule& act, const std::string& member,
                                                         int duration, const TimeWindow& window) {
  for (int day = 0; day < act.horizon_days; ++day) {
    const auto span = waking_span(act, member, day);
    if (!span) continue;
    const int lo = std::max(span->start, window.start), hi = std::min(span->end, window.end);
    std::vector<TimeWindow> busy;
    for (const auto& a : act.activities)
      if (a.member == member && a.day == day) busy.push_back({a.start, a.end()});
    for (const auto& g : activity::free_gaps(busy, lo, hi)) {
      const int s = (g.start + 4) / 5 * 5;
      if (s + duration <= g.end) return std::make_pair(day, s);
    }
  }
  return std::nullopt;
}

inline json affordance_schema() {
  return json::parse(R"({
    "type": "object", "required": ["proposals"],
    "properties": {"proposals": {"type": "array", "items": {
      "type": "object", "required": ["object", "member", "label"],
      "properties": {"object": {"type": "string"}, "member": {"type": "string"},
                     "label": {"type": "string", "minLength": 1},
                     "duration": {"type": "integer", "minimum": 5, "maximum": 240}}}}}})");
}

inline json template_affordance_proposals(const json& input, Rng&) {
  json out = json::array();
  const auto& members = input.at("members");
  for (const auto& o : input.at("objects")) {
    const auto label = o.at("labels")[0].get<std::string>();
    std::string member;
    if (o.contains("owner") && o.at("owner").is_string()) member = o.at("owner").get<std::string>();
    for (const auto& m : members) {
      if (!member.empty()) break;
      for (const auto& h : m.at("hobbies"))
        if (activity::hobby_label(h.get<std::string>()) == label) member = m.at("id").get<std::string>();
    }
    if (member.empty()) {
      long most = -1;
      for (const auto& m : members) {
        if (label == "coffee" && m.at("age").get<int>() < 16) continue;
        if (m.at("free_minutes").get<long>() > most) {
          most = m.at("free_minutes").get<long>();
          member = m.at("id").get<std::string>();
        }
      }
    }
    if (!member.empty()) out.push_back({{"object", o.at("object")}, {"member", member}, {"label", label}});
  }
  return {{"proposals", out}};
}

/// Binds activities the environment can now host and proposes new ones for
/// unused afforded objects, inserting each into the proposing member's
/// first free slot. Activities that were already bound keep their binding.
inline EnvToActResult env_to_act_influence(const EnvironmentSchema& env, const ActivitySchedule& act0,
                                           const std::vector<Persona>& personas, llm::Gateway& gw,
                                           const embed::EmbeddingProvider& embed, InfluenceState& state) {
  require(validate_environment(env).empty(), "environment must be valid before influence");
  EnvToActResult res{act0, false, {}, {}};
  auto& acts = res.schedule.activities;
  for (auto& a : acts) {
    if (activity::is_offsite(a.label)) continue;
    const auto b = activity::bind_activity(a, env, &embed);
    const bool unmet = a.unbound() || (a.objects.empty() && activity::find_kind(a.label) &&
                                       !activity::find_kind(a.label)->assets.empty());
    if (!unmet || b.room == kUnbound || (b.room == a.room && b.objects == a.objects)) continue;
    a.room = b.room;
    a.objects = b.objects;
    a.description = activity::activity_description(a, &env);
    res.changed = true;
  }

  const auto offers = unused_affordances(env, res.schedule, state);
  if (!offers.empty()) {
    if (!gw.schemas().has("affordance_proposals")) gw.schemas().add("affordance_proposals", affordance_schema());
    std::map<std::string, const Affordance*> by_object;
    json objects = json::array();
    for (const auto& o : offers) {
      by_object[o.object] = &o;
      const Room* room = env.find_room(o.room);
      objects.push_back({{"object", o.object},
                         {"description", o.description},
                         {"room", room ? room->label : o.room},
                         {"owner", room && room->owner ? json(*room->owner) : json(nullptr)},
                         {"labels", o.labels}});
      state.offered_objects.insert(o.object);
    }
    json members = json::array();
    for (const auto& p : personas) {
      long free_minutes = 0;
      for (int d = 0; d < res.schedule.horizon_days; ++d) {
        const auto span = waking_span(res.schedule, p.id, d);
        if (!span) continue;
        std::vector<TimeWindow> busy;
        for (const auto& a : acts)
          if (a.member == p.id && a.day == d) busy.push_back({a.start, a.end()});
        for (const auto& g : activity::free_gaps(busy, span->start, span->end)) free_minutes += g.end - g.start;
      }
      members.push_back({{"id", p.id}, {"age", p.age}, {"hobbies", p.hobbies}, {"free_minutes", free_minutes}});
    }
    const std::string prompt = llm::render_task_prompt(
        llm::build_context_preamble(state.memory), "affordance_proposals",
        "These objects are in the home but no activity uses them. Propose at most one activity per object and the "
        "member who would do it.",
        {{"objects", objects}, {"members", members}});
    const json reply = gw.generate_structured(
        prompt, "affordance_proposals", gw.defaults(), {"controller", "affordance_proposals"}, llm::kDefaultMaxRepairs,
        [&](const json& v) -> std::optional<std::string> {
          for (const auto& p : v.at("proposals")) {
            const auto obj = p.at("object").get<std::string>();
            if (!by_object.count(obj)) return "object '" + obj + "' was not offered";
            const auto mem = p.at("member").get<std::string>();
            if (std::none_of(personas.begin(), personas.end(), [&](const Persona& x) { return x.id == mem; }))
              return "unknown member '" + mem + "'";
          }
          return std::nullopt;
        });

    std::set<std::string> taken;
    for (const auto& p : reply.at("proposals")) {
      const auto obj = p.at("object").get<std::string>();
      Activity a;
      a.member = p.at("member").get<std::string>();
      a.label = to_lower(trim(p.at("label").get<std::string>()));
      const auto* kind = activity::find_kind(a.label);
      a.duration = p.contains("duration") ? p.at("duration").get<int>() : kind ? kind->duration : kDefaultProposalMinutes;
      const Room* room = env.find_room(by_object.at(obj)->room);
      if (!taken.insert(obj).second) {
        res.dropped.push_back({a.member, a.label, obj, "object already proposed"});
        continue;
      }
      if (room && detail::foreign_bedroom(*room, a.member)) {
        res.dropped.push_back({a.member, a.label, obj, "object is in another member's bedroom"});
        continue;
      }
      if (kind && kind->offsite) {
        res.dropped.push_back({a.member, a.label, obj, "activity happens away from home"});
        continue;
      }
      const auto slot = find_free_slot(res.schedule, a.member, a.duration, kind ? kind->window : TimeWindow{});
      if (!slot) {
        res.dropped.push_back({a.member, a.label, obj, "no free slot"});
        continue;
      }
      a.day = slot->first;
      a.start = slot->second;
      a.room = by_object.at(obj)->room;
      a.objects = {obj};
      a.description = activity::activity_description(a, &env);
      acts.push_back(a);
      res.inserted.push_back(std::move(a));
      res.changed = true;
    }
  }
  if (!res.changed) {
    res.schedule = act0;
    return res;
  }
  res.schedule = normalized(std::move(res.schedule));
  if (const auto v = validate_schedule(res.schedule, env); !v.empty())
    fail(ErrorCode::consistency_failure, "influence produced an invalid schedule: " + to_string(v.front()));
  return res;
}

inline void register_controller_templates(llm::TemplateProvider& stub) {
  stub.on("asset_selection", template_asset_selection);
  stub.on("affordance_proposals", template_affordance_proposals);
}

}  // namespace hhgen::controller
