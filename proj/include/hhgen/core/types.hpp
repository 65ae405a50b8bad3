#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "hhgen/core/geometry.hpp"
#include "hhgen/error.hpp"

namespace hhgen {

// ---------------------------------------------------------------------------
// Enumerations. Each has a canonical lower-case spelling used in JSON/CSV.

enum class OrganizationLevel { messy, typical, organized };
enum class SleepHabit { early, typical, late };
enum class RoomFunction { sleeping, office, kitchen, living, dining, bath, hobby, other };
enum class DoorKind { standard, archway, open_wall };
enum class SupportKind { floor, wall, surface_of };

inline std::string_view to_string(OrganizationLevel v) {
  switch (v) {
    case OrganizationLevel::messy: return "messy";
    case OrganizationLevel::typical: return "typical";
    case OrganizationLevel::organized: return "organized";
  }
  return "typical";
}

inline std::string_view to_string(SleepHabit v) {
  switch (v) {
    case SleepHabit::early: return "early";
    case SleepHabit::typical: return "typical";
    case SleepHabit::late: return "late";
  }
  return "typical";
}

inline std::string_view to_string(RoomFunction v) {
  switch (v) {
    case RoomFunction::sleeping: return "sleeping";
    case RoomFunction::office: return "office";
    case RoomFunction::kitchen: return "kitchen";
    case RoomFunction::living: return "living";
    case RoomFunction::dining: return "dining";
    case RoomFunction::bath: return "bath";
    case RoomFunction::hobby: return "hobby";
    case RoomFunction::other: return "other";
  }
  return "other";
}

inline std::string_view to_string(DoorKind v) {
  switch (v) {
    case DoorKind::standard: return "standard";
    case DoorKind::archway: return "archway";
    case DoorKind::open_wall: return "open_wall";
  }
  return "standard";
}

inline std::string_view to_string(SupportKind v) {
  switch (v) {
    case SupportKind::floor: return "floor";
    case SupportKind::wall: return "wall";
    case SupportKind::surface_of: return "surface-of";
  }
  return "floor";
}

template <typename E>
std::optional<E> parse_enum(std::string_view s);

template <>
inline std::optional<OrganizationLevel> parse_enum(std::string_view s) {
  for (auto v : {OrganizationLevel::messy, OrganizationLevel::typical, OrganizationLevel::organized})
    if (to_string(v) == s) return v;
  return std::nullopt;
}

template <>
inline std::optional<SleepHabit> parse_enum(std::string_view s) {
  for (auto v : {SleepHabit::early, SleepHabit::typical, SleepHabit::late})
    if (to_string(v) == s) return v;
  return std::nullopt;
}

inline constexpr RoomFunction kAllRoomFunctions[] = {
    RoomFunction::sleeping, RoomFunction::office, RoomFunction::kitchen, RoomFunction::living,
    RoomFunction::dining,   RoomFunction::bath,   RoomFunction::hobby,   RoomFunction::other};

template <>
inline std::optional<RoomFunction> parse_enum(std::string_view s) {
  for (auto v : kAllRoomFunctions)
    if (to_string(v) == s) return v;
  return std::nullopt;
}

template <>
inline std::optional<DoorKind> parse_enum(std::string_view s) {
  for (auto v : {DoorKind::standard, DoorKind::archway, DoorKind::open_wall})
    if (to_string(v) == s) return v;
  return std::nullopt;
}

template <>
inline std::optional<SupportKind> parse_enum(std::string_view s) {
  for (auto v : {SupportKind::floor, SupportKind::wall, SupportKind::surface_of})
    if (to_string(v) == s) return v;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Household inputs.

struct Persona {
  std::string id;
  std::string name;
  int age = 30;
  std::string occupation;
  bool works_from_home = false;
  OrganizationLevel organization_level = OrganizationLevel::typical;
  SleepHabit sleep_habit = SleepHabit::typical;
  std::vector<std::string> hobbies;
  std::string free_text;

  bool operator==(const Persona&) const = default;
};

struct Bounds {
  double width = 0.0;
  double depth = 0.0;

  double area() const { return width * depth; }
  Rect rect() const { return {0.0, 0.0, width, depth}; }
  bool operator==(const Bounds&) const = default;
};

struct EnvironmentConstraints {
  std::string house_type;
  std::vector<std::string> required_rooms;
  Bounds bounds;
  std::string notes;

  bool operator==(const EnvironmentConstraints&) const = default;
};

struct TimeWindow {
  int start = 0;
  int end = 1440;

  bool contains(int s, int e) const { return s >= start && e <= end; }
  bool operator==(const TimeWindow&) const = default;
};

struct RobotProfile {
  std::string name;
  std::vector<std::string> capabilities;
  TimeWindow availability;

  bool has(std::string_view capability) const {
    return std::find(capabilities.begin(), capabilities.end(), capability) != capabilities.end();
  }
  bool operator==(const RobotProfile&) const = default;
};

// ---------------------------------------------------------------------------
// Environment schema.

struct Room {
  std::string id;
  std::string label;
  RoomFunction function = RoomFunction::other;
  Rect rect;
  std::optional<std::string> owner;

  bool operator==(const Room&) const = default;
};

struct Door {
  std::string room_a;
  std::string room_b;
  Segment segment;
  DoorKind kind = DoorKind::standard;

  bool operator==(const Door&) const = default;
};

struct Dims {
  double w = 0.0;
  double d = 0.0;
  double h = 0.0;
  bool operator==(const Dims&) const = default;
};

struct Pivot {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  bool operator==(const Pivot&) const = default;
};

struct AssetRecord {
  std::string id;
  std::string description;
  Dims dims;
  Pivot pivot;
  std::optional<std::string> image_ref;

  double footprint_area() const { return dims.w * dims.d; }
  bool operator==(const AssetRecord&) const = default;
};

struct Pose {
  double x = 0.0;
  double y = 0.0;
  double yaw = 0.0;
  bool operator==(const Pose&) const = default;
};

struct Support {
  SupportKind kind = SupportKind::floor;
  std::string host;  // PlacedObject id when kind == surface_of

  bool operator==(const Support&) const = default;
};

struct PlacedObject {
  std::string id;
  std::string asset;
  std::string room;
  Pose pose;
  Support support;

  bool operator==(const PlacedObject&) const = default;
};

/// Axis-aligned footprint of an asset placed with `pose`: the pivot sits at
/// (pose.x, pose.y) and the box rotates about it counter-clockwise by yaw.
inline Rect footprint(const AssetRecord& asset, const Pose& pose) {
  const double rad = pose.yaw * M_PI / 180.0;
  double c = std::cos(rad), s = std::sin(rad);
  // Right angles are the common case; keep them exact.
  if (near(c, 0.0, 1e-12)) c = 0.0;
  if (near(s, 0.0, 1e-12)) s = 0.0;
  const double xs[2] = {-asset.pivot.x, asset.dims.w - asset.pivot.x};
  const double ys[2] = {-asset.pivot.y, asset.dims.d - asset.pivot.y};
  double minx = 1e300, miny = 1e300, maxx = -1e300, maxy = -1e300;
  for (double lx : xs) {
    for (double ly : ys) {
      const double wx = pose.x + c * lx - s * ly;
      const double wy = pose.y + s * lx + c * ly;
      minx = std::min(minx, wx);
      maxx = std::max(maxx, wx);
      miny = std::min(miny, wy);
      maxy = std::max(maxy, wy);
    }
  }
  return {minx, miny, maxx - minx, maxy - miny};
}

struct EnvironmentSchema {
  Bounds bounds;
  std::vector<Room> rooms;
  std::vector<Door> doors;
  std::vector<PlacedObject> objects;
  std::vector<AssetRecord> assets;  // catalog records referenced by objects
  std::string description;

  const Room* find_room(std::string_view id) const {
    for (const auto& r : rooms)
      if (r.id == id) return &r;
    return nullptr;
  }
  const PlacedObject* find_object(std::string_view id) const {
    for (const auto& o : objects)
      if (o.id == id) return &o;
    return nullptr;
  }
  const AssetRecord* find_asset(std::string_view id) const {
    for (const auto& a : assets)
      if (a.id == id) return &a;
    return nullptr;
  }
  std::optional<Rect> object_footprint(const PlacedObject& o) const {
    const AssetRecord* a = find_asset(o.asset);
    if (!a) return std::nullopt;
    return footprint(*a, o.pose);
  }

  bool operator==(const EnvironmentSchema&) const = default;
};

// ---------------------------------------------------------------------------
// Activities.

inline constexpr std::string_view kUnbound = "unbound";
inline constexpr std::string_view kRobotSpeaker = "robot";
inline constexpr int kMinutesPerDay = 1440;

struct Activity {
  std::string member;
  std::string label;
  std::string description;
  int day = 0;
  int start = 0;
  int duration = 1;
  std::string room{kUnbound};
  std::vector<std::string> objects;
  bool involves_robot = false;

  int end() const { return start + duration; }
  bool unbound() const { return room == kUnbound; }
  bool operator==(const Activity&) const = default;
};

inline bool schedule_order(const Activity& a, const Activity& b) {
  return std::tie(a.member, a.day, a.start, a.duration, a.label) <
         std::tie(b.member, b.day, b.start, b.duration, b.label);
}

struct ActivitySchedule {
  std::vector<Activity> activities;
  int horizon_days = 1;
  std::string description;

  bool operator==(const ActivitySchedule&) const = default;
};

/// Stable identity of an activity inside a schedule.
struct ActivityRef {
  std::string member;
  int day = 0;
  int start = 0;

  static ActivityRef of(const Activity& a) { return {a.member, a.day, a.start}; }
  bool matches(const Activity& a) const { return a.member == member && a.day == day && a.start == start; }
  bool operator==(const ActivityRef&) const = default;
};

struct Turn {
  std::string speaker;
  std::string utterance;
  bool operator==(const Turn&) const = default;
};

struct InteractionTranscript {
  ActivityRef activity;
  std::vector<Turn> turns;
  bool operator==(const InteractionTranscript&) const = default;
};

// ---------------------------------------------------------------------------
// Pipeline memory.

struct ContextualMemory {
  std::string task_description;
  std::vector<std::string> pipeline_steps;
  std::vector<std::pair<std::string, std::string>> completed;
  std::string current_requirements;

  bool operator==(const ContextualMemory&) const = default;
};

}  // namespace hhgen
