#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hhgen/core/json.hpp"
#include "hhgen/llm/gateway.hpp"
#include "hhgen/llm/memory.hpp"
#include "hhgen/util/text.hpp"

namespace hhgen::env {

constexpr double kLayoutFill = 0.85;  // usable share of the bounds area
constexpr double kMinRoomArea = 4.0;
constexpr double kMinRoomSide = 1.5;

struct ProgramEntry {
  std::string label;
  RoomFunction function = RoomFunction::other;
  std::optional<std::string> owner;
  double target_area = 9.0;

  bool operator==(const ProgramEntry&) const = default;
};

struct RoomProgram {
  std::vector<ProgramEntry> entries;

  double total_area() const {
    double s = 0.0;
    for (const auto& e : entries) s += e.target_area;
    return s;
  }
  std::size_t count(RoomFunction f) const {
    return static_cast<std::size_t>(
        std::count_if(entries.begin(), entries.end(), [f](const ProgramEntry& e) { return e.function == f; }));
  }
  bool operator==(const RoomProgram&) const = default;
};

inline void to_json(json& j, const ProgramEntry& e) {
  j = {{"label", e.label}, {"function", e.function}, {"owner", e.owner ? json(*e.owner) : json(nullptr)},
       {"target_area", e.target_area}};
}

inline double default_area(RoomFunction f) {
  switch (f) {
    case RoomFunction::sleeping: return 12.0;
    case RoomFunction::office: return 9.0;
    case RoomFunction::kitchen: return 10.0;
    case RoomFunction::living: return 18.0;
    case RoomFunction::dining: return 12.0;
    case RoomFunction::bath: return 5.0;
    case RoomFunction::hobby: return 9.0;
    case RoomFunction::other: return 8.0;
  }
  return 8.0;
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
    case RoomFunction::other: return "room";
  }
  return "room";
}

/// Room function suggested by a free-form label ("art studio" -> hobby).
inline RoomFunction function_for_label(const std::string& label) {
  static const std::vector<std::pair<RoomFunction, std::vector<std::string>>> table = {
      {RoomFunction::bath, {"bath", "bathroom", "toilet", "restroom", "washroom", "shower"}},
      {RoomFunction::kitchen, {"kitchen", "kitchenette", "pantry"}},
      {RoomFunction::dining, {"dining"}},
      {RoomFunction::living, {"living", "lounge", "family room", "den"}},
      {RoomFunction::office, {"office", "study"}},
      {RoomFunction::sleeping, {"bedroom", "sleeping", "nursery"}},
      {RoomFunction::hobby,
       {"studio", "hobby", "craft", "workshop", "gym", "music", "game room", "playroom", "art", "laundry"}},
  };
  for (const auto& [f, keys] : table)
    for (const auto& k : keys)
      if (contains_phrase(label, k)) return f;
  return RoomFunction::other;
}

inline std::string bedroom_label(const Persona& p) { return p.name + "'s bedroom"; }

/// Enforces the program contract on whatever the model proposed: one
/// sleeping room per persona, office iff someone works from home, kitchen,
/// bath and living present, every required room present, sane areas, then
/// scales areas to fit the bounds when that keeps rooms usable.
inline RoomProgram normalize_program(RoomProgram proposed, const std::vector<Persona>& personas,
                                     const EnvironmentConstraints& constraints) {
  std::set<std::string> ids;
  for (const auto& p : personas) ids.insert(p.id);
  const bool any_wfh = std::any_of(personas.begin(), personas.end(), [](const Persona& p) { return p.works_from_home; });

  RoomProgram out;
  std::set<std::string> owners_done;
  std::set<std::string> labels;
  auto add = [&](ProgramEntry e) {
    if (!(e.target_area > 0.0) || !std::isfinite(e.target_area)) e.target_area = default_area(e.function);
    e.target_area = std::clamp(e.target_area, kMinRoomArea, 40.0);
    std::string base = trim(e.label).empty() ? generic_room_name(e.function) : trim(e.label);
    std::string label = base;
    for (int n = 2; labels.count(to_lower(label)); ++n) label = base + " " + std::to_string(n);
    e.label = label;
    labels.insert(to_lower(label));
    out.entries.push_back(std::move(e));
  };

  for (auto& e : proposed.entries) {
    if (e.function == RoomFunction::sleeping) {
      if (!e.owner || !ids.count(*e.owner) || owners_done.count(*e.owner)) {
        e.function = RoomFunction::other;  // unowned or duplicate bedroom
        e.owner.reset();
      } else {
        owners_done.insert(*e.owner);
      }
    } else {
      e.owner.reset();
    }
    if (e.function == RoomFunction::office && !any_wfh) e.function = RoomFunction::other;
    add(std::move(e));
  }
  for (const auto& p : personas)
    if (!owners_done.count(p.id)) add({bedroom_label(p), RoomFunction::sleeping, p.id, default_area(RoomFunction::sleeping)});
  for (auto f : {RoomFunction::kitchen, RoomFunction::bath, RoomFunction::living})
    if (!out.count(f)) add({generic_room_name(f), f, std::nullopt, default_area(f)});
  if (any_wfh && !out.count(RoomFunction::office)) add({"home office", RoomFunction::office, std::nullopt, default_area(RoomFunction::office)});
  for (const auto& req : constraints.required_rooms) {
    if (labels.count(to_lower(trim(req)))) continue;
    RoomFunction f = function_for_label(req);
    if (f == RoomFunction::sleeping) f = RoomFunction::other;
    if (f == RoomFunction::office && !any_wfh) f = RoomFunction::other;
    add({trim(req), f, std::nullopt, default_area(f)});
  }

  // Keep sleeping rooms first so room ids are stable across seeds.
  std::stable_sort(out.entries.begin(), out.entries.end(), [](const ProgramEntry& a, const ProgramEntry& b) {
    return (a.function == RoomFunction::sleeping) > (b.function == RoomFunction::sleeping);
  });

  const double capacity = kLayoutFill * constraints.bounds.area();
  const double total = out.total_area();
  if (total > capacity && total > 0.0) {
    const double scale = capacity / total;
    double smallest = 1e300;
    for (const auto& e : out.entries) smallest = std::min(smallest, e.target_area * scale);
    if (smallest >= kMinRoomArea) {
      // Slightly under the cap so grid snapping cannot push past it.
      for (auto& e : out.entries) e.target_area = std::floor(e.target_area * scale * 0.99 * 100.0) / 100.0;
    }
  }
  return out;
}

inline json room_program_schema() {
  return json::parse(R"({
    "type": "object", "required": ["rooms"],
    "properties": {"rooms": {"type": "array", "minItems": 1, "items": {
      "type": "object", "required": ["label", "function", "target_area"],
      "properties": {
        "label": {"type": "string", "minLength": 1},
        "function": {"enum": ["sleeping", "office", "kitchen", "living", "dining", "bath", "hobby", "other"]},
        "owner": {"type": ["string", "null"]},
        "target_area": {"type": "number", "minimum": 1, "maximum": 80}}}}}})");
}

inline json personas_brief(const std::vector<Persona>& personas) {
  json arr = json::array();
  for (const auto& p : personas)
    arr.push_back({{"id", p.id}, {"name", p.name}, {"age", p.age}, {"occupation", p.occupation},
                   {"works_from_home", p.works_from_home}, {"hobbies", p.hobbies}, {"free_text", p.free_text}});
  return arr;
}

inline RoomProgram generate_room_program(const std::vector<Persona>& personas, const EnvironmentConstraints& constraints,
                                         llm::Gateway& gw, const ContextualMemory& mem = {}) {
  require(!personas.empty(), "room program needs at least one persona");
  if (!gw.schemas().has("room_program")) gw.schemas().add("room_program", room_program_schema());
  const json input{{"personas", personas_brief(personas)},
                   {"house_type", constraints.house_type},
                   {"required_rooms", constraints.required_rooms},
                   {"bounds", constraints.bounds},
                   {"notes", constraints.notes}};
  const std::string prompt = llm::render_task_prompt(
      llm::build_context_preamble(mem), "room_program",
      "List the rooms of this home. Give every resident a personal sleeping room (owner = persona id), add a home "
      "office only if someone works from home, include every required room, and suggest a floor area in square "
      "meters for each room.",
      input);
  const json reply = gw.generate_structured(prompt, "room_program", {"environment", "room_program"});
  RoomProgram proposed;
  for (const auto& r : reply.at("rooms")) {
    ProgramEntry e;
    e.label = r.at("label").get<std::string>();
    e.function = r.at("function").get<RoomFunction>();
    if (r.contains("owner") && r.at("owner").is_string()) e.owner = r.at("owner").get<std::string>();
    e.target_area = r.at("target_area").get<double>();
    proposed.entries.push_back(std::move(e));
  }
  return normalize_program(std::move(proposed), personas, constraints);
}

/// Template reply for the room_program task.
inline json template_room_program(const json& input, Rng& rng) {
  json rooms = json::array();
  bool wfh = false;
  for (const auto& p : input.value("personas", json::array())) {
    rooms.push_back({{"label", p.value("name", std::string("resident")) + "'s bedroom"},
                     {"function", "sleeping"},
                     {"owner", p.value("id", std::string{})},
                     {"target_area", std::round(default_area(RoomFunction::sleeping) * rng.uniform(0.85, 1.1))}});
    wfh = wfh || p.value("works_from_home", false);
  }
  auto add = [&](const std::string& label, RoomFunction f) {
    rooms.push_back({{"label", label}, {"function", std::string(to_string(f))}, {"owner", nullptr},
                     {"target_area", std::round(default_area(f) * rng.uniform(0.85, 1.1))}});
  };
  add("kitchen", RoomFunction::kitchen);
  add("living room", RoomFunction::living);
  add("bathroom", RoomFunction::bath);
  if (rng.chance(0.5)) add("dining room", RoomFunction::dining);
  if (wfh) add("home office", RoomFunction::office);
  for (const auto& req : input.value("required_rooms", json::array())) {
    const auto label = req.get<std::string>();
    RoomFunction f = function_for_label(label);
    if (f == RoomFunction::sleeping) f = RoomFunction::other;
    bool present = false;
    for (const auto& r : rooms) present = present || to_lower(r.at("label").get<std::string>()) == to_lower(label);
    if (!present) add(label, f);
  }
  return {{"rooms", rooms}};
}

}  // namespace hhgen::env
