#pragma once

// Textual summaries of environments and schedules. Both are pure functions
// of structure so re-serializing the same value yields identical text.

#include <algorithm>
#include <string>

#include "hhgen/core/types.hpp"

namespace hhgen {

inline std::string describe_environment(const EnvironmentSchema& env) {
  std::string out = std::to_string(env.rooms.size()) + " rooms.";
  for (const auto& room : env.rooms) {
    out += "\n" + room.label + " (" + std::string(to_string(room.function)) + "):";
    bool any = false;
    for (const auto& obj : env.objects) {
      if (obj.room != room.id) continue;
      const AssetRecord* asset = env.find_asset(obj.asset);
      out += any ? ", " : " ";
      out += asset ? asset->description : obj.asset;
      any = true;
    }
    out += any ? "." : " empty.";
  }
  return out;
}

inline std::string describe_schedule(const ActivitySchedule& sched) {
  std::string out;
  for (const auto& a : sched.activities) {
    if (!out.empty()) out += "\n";
    out += a.member + ": " + a.label;
    if (!a.description.empty()) out += " - " + a.description;
  }
  return out;
}

inline std::string describe_household(const std::vector<Persona>& personas) {
  std::string out;
  for (const auto& p : personas) {
    if (!out.empty()) out += "\n";
    out += p.id + ": " + std::to_string(p.age) + "-year-old " + (p.occupation.empty() ? "resident" : p.occupation);
    out += p.works_from_home ? ", works from home" : "";
    out += ", " + std::string(to_string(p.organization_level)) + " organization, " +
           std::string(to_string(p.sleep_habit)) + " sleeper";
    for (std::size_t i = 0; i < p.hobbies.size(); ++i) out += (i ? ", " : "; hobbies: ") + p.hobbies[i];
    out += ".";
    if (!p.free_text.empty()) out += " " + p.free_text;
  }
  return out;
}

inline EnvironmentSchema with_description(EnvironmentSchema env) {
  env.description = describe_environment(env);
  return env;
}

/// Sorts activities by (member, day, start) and regenerates the description.
inline ActivitySchedule normalized(ActivitySchedule sched) {
  std::stable_sort(sched.activities.begin(), sched.activities.end(), schedule_order);
  sched.description = describe_schedule(sched);
  return sched;
}

}  // namespace hhgen
