#pragma once

// Pluggable exporters from the neutral scene and event representations to
// target formats, looked up by id.

#include <functional>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "hhgen/core/describe.hpp"
#include "hhgen/core/json.hpp"
#include "hhgen/core/validate.hpp"
#include "hhgen/env/floorplan.hpp"
#include "hhgen/util/csv.hpp"

namespace hhgen::io {

struct SceneAdapter {
  std::string id;
  std::string extension;
  std::function<std::string(const EnvironmentSchema&)> write;
};

struct TraceAdapter {
  std::string id;
  std::string extension;
  std::function<std::string(const ActivitySchedule&, const std::vector<InteractionTranscript>&)> write;
};

template <typename Adapter>
class AdapterRegistry {
 public:
  void add(Adapter a) {
    require(!a.id.empty() && static_cast<bool>(a.write), "adapter needs an id and a writer");
    std::lock_guard lock(mu_);
    adapters_[a.id] = std::move(a);
  }

  const Adapter& get(const std::string& id) const {
    std::lock_guard lock(mu_);
    auto it = adapters_.find(id);
    if (it == adapters_.end()) fail(ErrorCode::unknown_adapter, "no adapter registered as '" + id + "'");
    return it->second;
  }

  std::vector<std::string> ids() const {
    std::lock_guard lock(mu_);
    std::vector<std::string> out;
    for (const auto& [k, _] : adapters_) out.push_back(k);
    return out;
  }

 private:
  mutable std::mutex mu_;
  std::map<std::string, Adapter> adapters_;
};

// ---------------------------------------------------------------------------
// Scene.

inline std::string scene_to_neutral_json(const EnvironmentSchema& env) { return canonical_dump(json(env)); }

inline EnvironmentSchema scene_from_neutral_json(const std::string& text) {
  return parse_json_as<EnvironmentSchema>(text, "scene");
}

inline AdapterRegistry<SceneAdapter>& scene_adapters() {
  static AdapterRegistry<SceneAdapter> reg;
  static const bool seeded = [] {
    reg.add({"neutral-json", ".json", scene_to_neutral_json});
    reg.add({"grid-txt", ".txt", [](const EnvironmentSchema& e) { return env::render_floorplan(e); }});
    return true;
  }();
  (void)seeded;
  return reg;
}

inline std::string export_scene(const EnvironmentSchema& env, const std::string& adapter_id) {
  return scene_adapters().get(adapter_id).write(env);
}

// ---------------------------------------------------------------------------
// Event trace.

inline std::vector<Activity> events_in_time_order(const ActivitySchedule& sched) {
  auto events = sched.activities;
  std::stable_sort(events.begin(), events.end(), [](const Activity& a, const Activity& b) {
    return std::tie(a.day, a.start, a.member, a.duration, a.label) < std::tie(b.day, b.start, b.member, b.duration, b.label);
  });
  return events;
}

/// {"horizon_days", "description", "events": [...], "transcripts": [...]},
/// events sorted by (day, start).
inline std::string trace_to_neutral_json(const ActivitySchedule& sched, const std::vector<InteractionTranscript>& t) {
  return canonical_dump({{"horizon_days", sched.horizon_days},
                         {"description", sched.description},
                         {"events", events_in_time_order(sched)},
                         {"transcripts", t}});
}

struct Trace {
  ActivitySchedule schedule;
  std::vector<InteractionTranscript> transcripts;
};

/// Inverse of trace_to_neutral_json; activities come back in schedule
/// order (member, day, start).
inline Trace trace_from_neutral_json(const std::string& text) {
  const json j = parse_json_as<json>(text, "event trace");
  Trace t;
  try {
    t.schedule.horizon_days = j.at("horizon_days").get<int>();
    t.schedule.description = j.value("description", std::string{});
    t.schedule.activities = j.at("events").get<std::vector<Activity>>();
    t.transcripts = j.value("transcripts", json::array()).get<std::vector<InteractionTranscript>>();
  } catch (const json::exception& e) {
    fail(ErrorCode::io, std::string("invalid event trace: ") + e.what());
  }
  std::stable_sort(t.schedule.activities.begin(), t.schedule.activities.end(), schedule_order);
  return t;
}

/// One row per activity: member, day, start, duration, label, room.
inline std::string trace_to_csv(const ActivitySchedule& sched) {
  std::vector<csv::Row> rows = {{"member", "day", "start", "duration", "label", "room"}};
  for (const auto& a : events_in_time_order(sched))
    rows.push_back({a.member, std::to_string(a.day), std::to_string(a.start), std::to_string(a.duration), a.label, a.room});
  return csv::write(rows);
}

inline AdapterRegistry<TraceAdapter>& trace_adapters() {
  static AdapterRegistry<TraceAdapter> reg;
  static const bool seeded = [] {
    reg.add({"neutral-json", ".json", trace_to_neutral_json});
    reg.add({"csv", ".csv", [](const ActivitySchedule& s, const std::vector<InteractionTranscript>&) { return trace_to_csv(s); }});
    return true;
  }();
  (void)seeded;
  return reg;
}

inline std::string export_trace(const ActivitySchedule& sched, const std::vector<InteractionTranscript>& transcripts,
                                 const std::string& adapter_id) {
  const auto& adapter = trace_adapters().get(adapter_id);
  const auto problems = validate_schedule_temporal(sched);
  if (!problems.empty()) fail(ErrorCode::precondition, "cannot export an invalid schedule: " + to_string(problems.front()));
  return adapter.write(sched, transcripts);
}

}  // namespace hhgen::io
