#pragma once

#include <algorithm>
#include <map>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include "hhgen/core/describe.hpp"
#include "hhgen/core/types.hpp"
#include "hhgen/util/text.hpp"

namespace hhgen {

/// Minimum opening for a standard door, and the wall overlap that makes two
/// rooms adjacent.
constexpr double kMinDoorWidth = 0.8;

enum class ViolationKind {
  // environment
  nested_room,        // ids = {inner, outer}
  room_overlap,       // ids = {a, b}
  disconnected,       // ids = rooms unreachable from the first room
  out_of_bounds,      // ids = {room} outside bounds, or {object} outside its room
  object_overlap,     // ids = {a, b}, floor objects in one room
  invalid_room,       // ids = {room}
  invalid_door,       // ids = {room_a, room_b}
  unknown_asset,      // ids = {object}
  stale_description,  // ids = {}
  // schedule
  overlap,            // ids = {member}, day set
  unknown_room,       // ids = {room}
  unknown_object,     // ids = {object}
  invalid_interval,   // ids = {member}, day set
  day_out_of_range,   // ids = {member}, day set
};

inline std::string_view to_string(ViolationKind k) {
  switch (k) {
    case ViolationKind::nested_room: return "nested_room";
    case ViolationKind::room_overlap: return "room_overlap";
    case ViolationKind::disconnected: return "disconnected";
    case ViolationKind::out_of_bounds: return "out_of_bounds";
    case ViolationKind::object_overlap: return "object_overlap";
    case ViolationKind::invalid_room: return "invalid_room";
    case ViolationKind::invalid_door: return "invalid_door";
    case ViolationKind::unknown_asset: return "unknown_asset";
    case ViolationKind::stale_description: return "stale_description";
    case ViolationKind::overlap: return "overlap";
    case ViolationKind::unknown_room: return "unknown_room";
    case ViolationKind::unknown_object: return "unknown_object";
    case ViolationKind::invalid_interval: return "invalid_interval";
    case ViolationKind::day_out_of_range: return "day_out_of_range";
  }
  return "unknown";
}

struct Violation {
  ViolationKind kind;
  std::vector<std::string> ids;
  int day = -1;
  std::string detail;

  bool operator==(const Violation&) const = default;
};

inline std::string to_string(const Violation& v) {
  std::string s(to_string(v.kind));
  s += "(" + join(v.ids, ", ") + ")";
  if (v.day >= 0) s += " day " + std::to_string(v.day);
  if (!v.detail.empty()) s += ": " + v.detail;
  return s;
}

/// Rooms reachable from `start` over the door graph.
inline std::set<std::string> reachable_rooms(const EnvironmentSchema& env, const std::string& start) {
  std::map<std::string, std::vector<std::string>> adj;
  for (const auto& d : env.doors) {
    adj[d.room_a].push_back(d.room_b);
    adj[d.room_b].push_back(d.room_a);
  }
  std::set<std::string> seen{start};
  std::queue<std::string> q;
  q.push(start);
  while (!q.empty()) {
    auto cur = q.front();
    q.pop();
    for (const auto& n : adj[cur])
      if (seen.insert(n).second) q.push(n);
  }
  return seen;
}

inline std::vector<Violation> validate_environment(const EnvironmentSchema& env) {
  std::vector<Violation> out;
  if (env.rooms.empty()) {
    out.push_back({ViolationKind::invalid_room, {}, -1, "environment has no rooms"});
    return out;
  }
  const Rect bounds = env.bounds.rect();
  std::set<std::string> ids;
  for (const auto& r : env.rooms) {
    if (!ids.insert(r.id).second) out.push_back({ViolationKind::invalid_room, {r.id}, -1, "duplicate room id"});
    if (r.rect.w <= 0 || r.rect.h <= 0) out.push_back({ViolationKind::invalid_room, {r.id}, -1, "non-positive size"});
    if (!contains(bounds, r.rect)) out.push_back({ViolationKind::out_of_bounds, {r.id}, -1, "room outside bounds"});
  }
  for (std::size_t i = 0; i < env.rooms.size(); ++i) {
    for (std::size_t j = 0; j < env.rooms.size(); ++j) {
      if (i == j) continue;
      const auto& a = env.rooms[i];
      const auto& b = env.rooms[j];
      if (strictly_contains(a.rect, b.rect)) {
        out.push_back({ViolationKind::nested_room, {b.id, a.id}, -1, b.id + " inside " + a.id});
      } else if (i < j && !strictly_contains(b.rect, a.rect) && interiors_intersect(a.rect, b.rect)) {
        out.push_back({ViolationKind::room_overlap, {a.id, b.id}, -1, {}});
      }
    }
  }

  for (const auto& d : env.doors) {
    const Room* a = env.find_room(d.room_a);
    const Room* b = env.find_room(d.room_b);
    auto bad = [&](std::string why) { out.push_back({ViolationKind::invalid_door, {d.room_a, d.room_b}, -1, std::move(why)}); };
    if (!a || !b) { bad("unknown room"); continue; }
    if (d.room_a == d.room_b) { bad("door connects a room to itself"); continue; }
    auto wall = shared_wall(a->rect, b->rect);
    if (!wall || !segment_on(d.segment, *wall)) { bad("segment not on a shared wall"); continue; }
    if (d.kind == DoorKind::standard && d.segment.length() < kMinDoorWidth - kGeomEps) bad("standard door narrower than 0.8 m");
  }

  const auto reach = reachable_rooms(env, env.rooms.front().id);
  std::vector<std::string> unreachable;
  for (const auto& r : env.rooms)
    if (!reach.count(r.id)) unreachable.push_back(r.id);
  if (!unreachable.empty()) out.push_back({ViolationKind::disconnected, unreachable, -1, {}});

  std::map<std::string, Rect> floor_fp;
  std::set<std::string> object_ids;
  for (const auto& o : env.objects) {
    if (!object_ids.insert(o.id).second) out.push_back({ViolationKind::unknown_asset, {o.id}, -1, "duplicate object id"});
    const Room* room = env.find_room(o.room);
    const auto fp = env.object_footprint(o);
    if (!room || !fp) {
      out.push_back({ViolationKind::unknown_asset, {o.id}, -1, room ? "asset record missing" : "room missing"});
      continue;
    }
    if (!contains(room->rect, *fp)) out.push_back({ViolationKind::out_of_bounds, {o.id}, -1, "object outside its room"});
    if (o.support.kind == SupportKind::surface_of) {
      const PlacedObject* host = env.find_object(o.support.host);
      if (!host || host->room != o.room) out.push_back({ViolationKind::unknown_asset, {o.id}, -1, "support host missing"});
    }
    if (o.support.kind == SupportKind::floor) floor_fp.emplace(o.id, *fp);
  }
  for (auto i = floor_fp.begin(); i != floor_fp.end(); ++i) {
    for (auto j = std::next(i); j != floor_fp.end(); ++j) {
      if (env.find_object(i->first)->room != env.find_object(j->first)->room) continue;
      if (interiors_intersect(i->second, j->second)) out.push_back({ViolationKind::object_overlap, {i->first, j->first}, -1, {}});
    }
  }

  if (!env.description.empty() && env.description != describe_environment(env))
    out.push_back({ViolationKind::stale_description, {}, -1, "description does not match structure"});
  return out;
}

/// Interval checks only: bounds, horizon and per-member/day overlaps.
inline std::vector<Violation> validate_schedule_temporal(const ActivitySchedule& sched) {
  std::vector<Violation> out;
  std::map<std::pair<std::string, int>, std::vector<const Activity*>> by_day;
  for (const auto& a : sched.activities) {
    if (a.day < 0 || a.start < 0 || a.duration <= 0 || a.end() > kMinutesPerDay) {
      out.push_back({ViolationKind::invalid_interval, {a.member}, a.day,
                     a.label + " " + format_hhmm(std::max(a.start, 0)) + "+" + std::to_string(a.duration) + "min"});
      continue;
    }
    if (a.day >= sched.horizon_days) out.push_back({ViolationKind::day_out_of_range, {a.member}, a.day, a.label});
    by_day[{a.member, a.day}].push_back(&a);
  }
  for (auto& [key, acts] : by_day) {
    std::sort(acts.begin(), acts.end(), [](const Activity* x, const Activity* y) { return x->start < y->start; });
    for (std::size_t i = 1; i < acts.size(); ++i) {
      // Compare against every earlier interval still open at this start.
      for (std::size_t j = 0; j < i; ++j) {
        if (acts[j]->end() > acts[i]->start) {
          out.push_back({ViolationKind::overlap, {key.first}, key.second,
                         acts[j]->label + " " + format_hhmm(acts[j]->start) + "-" + format_hhmm(acts[j]->end()) +
                             " overlaps " + acts[i]->label + " " + format_hhmm(acts[i]->start) + "-" +
                             format_hhmm(acts[i]->end())});
        }
      }
    }
  }
  return out;
}

inline std::vector<Violation> validate_schedule(const ActivitySchedule& sched, const EnvironmentSchema& env) {
  auto out = validate_schedule_temporal(sched);
  for (const auto& a : sched.activities) {
    if (!a.unbound() && !env.find_room(a.room)) out.push_back({ViolationKind::unknown_room, {a.room}, a.day, a.label});
    for (const auto& o : a.objects)
      if (!env.find_object(o)) out.push_back({ViolationKind::unknown_object, {o}, a.day, a.label});
  }
  return out;
}

}  // namespace hhgen
