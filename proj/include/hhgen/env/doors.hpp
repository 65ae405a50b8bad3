#pragma once

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "hhgen/env/floorplan.hpp"
#include "hhgen/env/layout.hpp"
#include "hhgen/llm/gateway.hpp"
#include "hhgen/llm/memory.hpp"

namespace hhgen::env {

constexpr double kStandardDoorWidth = 0.9;
constexpr double kArchwayWidth = 1.2;

/// Door opening on the shared wall of two rooms for the given kind:
/// standard 0.9 m and archway 1.2 m centered (clipped to the wall), open
/// wall spans the whole shared wall.
inline Segment door_segment(const Segment& wall, DoorKind kind) {
  switch (kind) {
    case DoorKind::open_wall: return wall;
    case DoorKind::archway: return centered_subsegment(wall, kArchwayWidth);
    case DoorKind::standard: break;
  }
  return centered_subsegment(wall, kStandardDoorWidth);
}

inline std::optional<Door> make_door(const Room& a, const Room& b, DoorKind kind) {
  auto wall = shared_wall(a.rect, b.rect);
  if (!wall || wall->length() < kMinDoorWidth - kGeomEps) return std::nullopt;
  return Door{a.id, b.id, door_segment(*wall, kind), kind};
}

/// Open plan between dining and living, archway between kitchen and
/// dining, ordinary doors elsewhere.
inline DoorKind recommended_door_kind(RoomFunction a, RoomFunction b) {
  auto is = [&](RoomFunction x, RoomFunction y) { return (a == x && b == y) || (a == y && b == x); };
  if (is(RoomFunction::dining, RoomFunction::living)) return DoorKind::open_wall;
  if (is(RoomFunction::kitchen, RoomFunction::dining)) return DoorKind::archway;
  return DoorKind::standard;
}

inline DoorKind parse_door_kind(const std::string& s) {
  std::string k = to_lower(trim(s));
  std::replace(k.begin(), k.end(), ' ', '_');
  std::replace(k.begin(), k.end(), '-', '_');
  return parse_enum<DoorKind>(k).value_or(DoorKind::standard);
}

inline bool has_door(const EnvironmentSchema& env, const std::string& a, const std::string& b) {
  for (const auto& d : env.doors)
    if ((d.room_a == a && d.room_b == b) || (d.room_a == b && d.room_b == a)) return true;
  return false;
}

inline std::vector<std::pair<std::size_t, std::size_t>> adjacent_pairs(const EnvironmentSchema& env) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < env.rooms.size(); ++i)
    for (std::size_t j = i + 1; j < env.rooms.size(); ++j)
      if (adjacent(env.rooms[i].rect, env.rooms[j].rect)) out.emplace_back(i, j);
  return out;
}

inline json door_kinds_schema() {
  return json::parse(R"({
    "type": "object", "required": ["doors"],
    "properties": {"doors": {"type": "array", "items": {
      "type": "object", "required": ["room_a", "room_b", "kind"],
      "properties": {"room_a": {"type": "string"}, "room_b": {"type": "string"}, "kind": {"type": "string"}}}}}})");
}

/// Asks the model which adjacent pairs get a door and of which kind. Only
/// pairs that really share a wall are honored; unknown kinds become
/// standard doors.
inline EnvironmentSchema generate_doors(EnvironmentSchema env, llm::Gateway& gw, const ContextualMemory& mem = {}) {
  const auto pairs = adjacent_pairs(env);
  if (pairs.empty()) return env;
  if (!gw.schemas().has("door_kinds")) gw.schemas().add("door_kinds", door_kinds_schema());
  json arr = json::array();
  for (auto [i, j] : pairs) {
    const auto& a = env.rooms[i];
    const auto& b = env.rooms[j];
    arr.push_back({{"room_a", a.id}, {"label_a", a.label}, {"function_a", a.function},
                   {"room_b", b.id}, {"label_b", b.label}, {"function_b", b.function}});
  }
  const std::string prompt = llm::render_task_prompt(
      llm::build_context_preamble(mem) + "Floor plan:\n" + render_floorplan(env), "door_kinds",
      "Choose which neighbouring rooms should be connected and the kind of opening for each: standard, archway or "
      "open_wall (for open-concept spaces).",
      {{"pairs", arr}});
  const json reply = gw.generate_structured(prompt, "door_kinds", {"environment", "door_kinds"});
  for (const auto& d : reply.at("doors")) {
    const Room* a = env.find_room(d.at("room_a").get<std::string>());
    const Room* b = env.find_room(d.at("room_b").get<std::string>());
    if (!a || !b || a->id == b->id || has_door(env, a->id, b->id)) continue;
    if (auto door = make_door(*a, *b, parse_door_kind(d.at("kind").get<std::string>()))) env.doors.push_back(*door);
  }
  return env;
}

inline json template_door_kinds(const json& input, Rng& rng) {
  json doors = json::array();
  for (const auto& p : input.value("pairs", json::array())) {
    const auto fa = parse_enum<RoomFunction>(p.value("function_a", std::string("other"))).value_or(RoomFunction::other);
    const auto fb = parse_enum<RoomFunction>(p.value("function_b", std::string("other"))).value_or(RoomFunction::other);
    auto is_public = [](RoomFunction f) {
      return f == RoomFunction::living || f == RoomFunction::dining || f == RoomFunction::kitchen || f == RoomFunction::other;
    };
    if (!(is_public(fa) || is_public(fb) || rng.chance(0.25))) continue;
    doors.push_back({{"room_a", p.at("room_a")}, {"room_b", p.at("room_b")},
                     {"kind", std::string(to_string(recommended_door_kind(fa, fb)))}});
  }
  return {{"doors", doors}};
}

}  // namespace hhgen::env
