#pragma once

// Canonical JSON encoding of every core type. Field names follow the domain
// model exactly; units are meters, minutes and degrees throughout.

#include <json.hpp>

#include <string>

#include "hhgen/core/types.hpp"
#include "hhgen/error.hpp"

namespace hhgen {

using nlohmann::json;

namespace detail {

template <typename E>
E enum_from(const json& j, std::string_view what) {
  const auto s = j.get<std::string>();
  auto v = parse_enum<E>(s);
  if (!v) throw json::other_error::create(599, "invalid " + std::string(what) + " '" + s + "'", &j);
  return *v;
}

inline json optional_string(const std::optional<std::string>& s) {
  return s ? json(*s) : json(nullptr);
}

inline std::optional<std::string> read_optional_string(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return it->get<std::string>();
}

}  // namespace detail

inline void to_json(json& j, OrganizationLevel v) { j = std::string(to_string(v)); }
inline void from_json(const json& j, OrganizationLevel& v) { v = detail::enum_from<OrganizationLevel>(j, "organization_level"); }
inline void to_json(json& j, SleepHabit v) { j = std::string(to_string(v)); }
inline void from_json(const json& j, SleepHabit& v) { v = detail::enum_from<SleepHabit>(j, "sleep_habit"); }
inline void to_json(json& j, RoomFunction v) { j = std::string(to_string(v)); }
inline void from_json(const json& j, RoomFunction& v) { v = detail::enum_from<RoomFunction>(j, "room function"); }
inline void to_json(json& j, DoorKind v) { j = std::string(to_string(v)); }
inline void from_json(const json& j, DoorKind& v) { v = detail::enum_from<DoorKind>(j, "door kind"); }

inline void to_json(json& j, const Persona& p) {
  j = json{{"id", p.id},
           {"name", p.name},
           {"age", p.age},
           {"occupation", p.occupation},
           {"works_from_home", p.works_from_home},
           {"organization_level", p.organization_level},
           {"sleep_habit", p.sleep_habit},
           {"hobbies", p.hobbies},
           {"free_text", p.free_text}};
}

inline void from_json(const json& j, Persona& p) {
  j.at("id").get_to(p.id);
  j.at("name").get_to(p.name);
  j.at("age").get_to(p.age);
  p.occupation = j.value("occupation", std::string{});
  p.works_from_home = j.value("works_from_home", false);
  p.organization_level = j.contains("organization_level") ? j.at("organization_level").get<OrganizationLevel>()
                                                          : OrganizationLevel::typical;
  p.sleep_habit = j.contains("sleep_habit") ? j.at("sleep_habit").get<SleepHabit>() : SleepHabit::typical;
  p.hobbies = j.value("hobbies", std::vector<std::string>{});
  j.at("free_text").get_to(p.free_text);
}

inline void to_json(json& j, const Bounds& b) { j = json{{"width", b.width}, {"depth", b.depth}}; }
inline void from_json(const json& j, Bounds& b) {
  j.at("width").get_to(b.width);
  j.at("depth").get_to(b.depth);
}

inline void to_json(json& j, const EnvironmentConstraints& c) {
  j = json{{"house_type", c.house_type}, {"required_rooms", c.required_rooms}, {"bounds", c.bounds}, {"notes", c.notes}};
}
inline void from_json(const json& j, EnvironmentConstraints& c) {
  c.house_type = j.value("house_type", std::string{});
  c.required_rooms = j.value("required_rooms", std::vector<std::string>{});
  j.at("bounds").get_to(c.bounds);
  c.notes = j.value("notes", std::string{});
}

inline void to_json(json& j, const TimeWindow& w) { j = json{{"start", w.start}, {"end", w.end}}; }
inline void from_json(const json& j, TimeWindow& w) {
  j.at("start").get_to(w.start);
  j.at("end").get_to(w.end);
}

inline void to_json(json& j, const RobotProfile& r) {
  j = json{{"name", r.name}, {"capabilities", r.capabilities}, {"availability", r.availability}};
}
inline void from_json(const json& j, RobotProfile& r) {
  j.at("name").get_to(r.name);
  j.at("capabilities").get_to(r.capabilities);
  r.availability = j.contains("availability") ? j.at("availability").get<TimeWindow>() : TimeWindow{};
}

inline void to_json(json& j, const Rect& r) { j = json{{"x", r.x}, {"y", r.y}, {"w", r.w}, {"h", r.h}}; }
inline void from_json(const json& j, Rect& r) {
  j.at("x").get_to(r.x);
  j.at("y").get_to(r.y);
  j.at("w").get_to(r.w);
  j.at("h").get_to(r.h);
}

inline void to_json(json& j, const Segment& s) {
  j = json{{"x1", s.a.x}, {"y1", s.a.y}, {"x2", s.b.x}, {"y2", s.b.y}};
}
inline void from_json(const json& j, Segment& s) {
  j.at("x1").get_to(s.a.x);
  j.at("y1").get_to(s.a.y);
  j.at("x2").get_to(s.b.x);
  j.at("y2").get_to(s.b.y);
}

inline void to_json(json& j, const Room& r) {
  j = json{{"id", r.id},
           {"label", r.label},
           {"function", r.function},
           {"rect", r.rect},
           {"owner", detail::optional_string(r.owner)}};
}
inline void from_json(const json& j, Room& r) {
  j.at("id").get_to(r.id);
  j.at("label").get_to(r.label);
  j.at("function").get_to(r.function);
  j.at("rect").get_to(r.rect);
  r.owner = detail::read_optional_string(j, "owner");
}

inline void to_json(json& j, const Door& d) {
  j = json{{"room_a", d.room_a}, {"room_b", d.room_b}, {"segment", d.segment}, {"kind", d.kind}};
}
inline void from_json(const json& j, Door& d) {
  j.at("room_a").get_to(d.room_a);
  j.at("room_b").get_to(d.room_b);
  j.at("segment").get_to(d.segment);
  j.at("kind").get_to(d.kind);
}

inline void to_json(json& j, const AssetRecord& a) {
  j = json{{"id", a.id},
           {"description", a.description},
           {"dims", {{"w", a.dims.w}, {"d", a.dims.d}, {"h", a.dims.h}}},
           {"pivot", {{"x", a.pivot.x}, {"y", a.pivot.y}, {"z", a.pivot.z}}},
           {"image_ref", detail::optional_string(a.image_ref)}};
}
inline void from_json(const json& j, AssetRecord& a) {
  j.at("id").get_to(a.id);
  j.at("description").get_to(a.description);
  const auto& d = j.at("dims");
  d.at("w").get_to(a.dims.w);
  d.at("d").get_to(a.dims.d);
  d.at("h").get_to(a.dims.h);
  const auto& p = j.at("pivot");
  p.at("x").get_to(a.pivot.x);
  p.at("y").get_to(a.pivot.y);
  p.at("z").get_to(a.pivot.z);
  a.image_ref = detail::read_optional_string(j, "image_ref");
}

inline void to_json(json& j, const Support& s) {
  j = json{{"kind", std::string(to_string(s.kind))}};
  if (s.kind == SupportKind::surface_of) j["host"] = s.host;
}
inline void from_json(const json& j, Support& s) {
  s.kind = detail::enum_from<SupportKind>(j.at("kind"), "support kind");
  s.host = s.kind == SupportKind::surface_of ? j.at("host").get<std::string>() : std::string{};
}

inline void to_json(json& j, const PlacedObject& o) {
  j = json{{"id", o.id},
           {"asset", o.asset},
           {"room", o.room},
           {"pose", {{"x", o.pose.x}, {"y", o.pose.y}, {"yaw", o.pose.yaw}}},
           {"support", o.support}};
}
inline void from_json(const json& j, PlacedObject& o) {
  j.at("id").get_to(o.id);
  j.at("asset").get_to(o.asset);
  j.at("room").get_to(o.room);
  const auto& p = j.at("pose");
  p.at("x").get_to(o.pose.x);
  p.at("y").get_to(o.pose.y);
  p.at("yaw").get_to(o.pose.yaw);
  j.at("support").get_to(o.support);
}

inline void to_json(json& j, const EnvironmentSchema& e) {
  j = json{{"bounds", e.bounds},   {"rooms", e.rooms},   {"doors", e.doors},
           {"objects", e.objects}, {"assets", e.assets}, {"description", e.description}};
}
inline void from_json(const json& j, EnvironmentSchema& e) {
  j.at("bounds").get_to(e.bounds);
  j.at("rooms").get_to(e.rooms);
  e.doors = j.value("doors", std::vector<Door>{});
  e.objects = j.value("objects", std::vector<PlacedObject>{});
  e.assets = j.value("assets", std::vector<AssetRecord>{});
  e.description = j.value("description", std::string{});
}

inline void to_json(json& j, const Activity& a) {
  j = json{{"member", a.member},   {"label", a.label},       {"description", a.description},
           {"day", a.day},         {"start", a.start},       {"duration", a.duration},
           {"room", a.room},       {"objects", a.objects},   {"involves_robot", a.involves_robot}};
}
inline void from_json(const json& j, Activity& a) {
  j.at("member").get_to(a.member);
  j.at("label").get_to(a.label);
  a.description = j.value("description", std::string{});
  j.at("day").get_to(a.day);
  j.at("start").get_to(a.start);
  j.at("duration").get_to(a.duration);
  a.room = j.value("room", std::string(kUnbound));
  a.objects = j.value("objects", std::vector<std::string>{});
  a.involves_robot = j.value("involves_robot", false);
}

inline void to_json(json& j, const ActivitySchedule& s) {
  j = json{{"activities", s.activities}, {"horizon_days", s.horizon_days}, {"description", s.description}};
}
inline void from_json(const json& j, ActivitySchedule& s) {
  j.at("activities").get_to(s.activities);
  j.at("horizon_days").get_to(s.horizon_days);
  s.description = j.value("description", std::string{});
}

inline void to_json(json& j, const ActivityRef& r) {
  j = json{{"member", r.member}, {"day", r.day}, {"start", r.start}};
}
inline void from_json(const json& j, ActivityRef& r) {
  j.at("member").get_to(r.member);
  j.at("day").get_to(r.day);
  j.at("start").get_to(r.start);
}

inline void to_json(json& j, const Turn& t) { j = json{{"speaker", t.speaker}, {"utterance", t.utterance}}; }
inline void from_json(const json& j, Turn& t) {
  j.at("speaker").get_to(t.speaker);
  j.at("utterance").get_to(t.utterance);
}

inline void to_json(json& j, const InteractionTranscript& t) { j = json{{"activity", t.activity}, {"turns", t.turns}}; }
inline void from_json(const json& j, InteractionTranscript& t) {
  j.at("activity").get_to(t.activity);
  j.at("turns").get_to(t.turns);
}

inline void to_json(json& j, const ContextualMemory& m) {
  json completed = json::array();
  for (const auto& [step, summary] : m.completed) completed.push_back({{"step", step}, {"summary", summary}});
  j = json{{"task_description", m.task_description},
           {"pipeline_steps", m.pipeline_steps},
           {"completed", completed},
           {"current_requirements", m.current_requirements}};
}
inline void from_json(const json& j, ContextualMemory& m) {
  j.at("task_description").get_to(m.task_description);
  j.at("pipeline_steps").get_to(m.pipeline_steps);
  m.completed.clear();
  for (const auto& c : j.at("completed")) m.completed.emplace_back(c.at("step").get<std::string>(), c.at("summary").get<std::string>());
  m.current_requirements = j.value("current_requirements", std::string{});
}

/// Parses `text` into T, converting library exceptions into Error(io).
template <typename T>
T parse_json_as(const std::string& text, std::string_view what) {
  try {
    return json::parse(text).get<T>();
  } catch (const json::exception& e) {
    fail(ErrorCode::io, "invalid " + std::string(what) + ": " + e.what());
  }
}

/// Canonical text form: sorted keys, two-space indent, trailing newline.
inline std::string canonical_dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace hhgen
