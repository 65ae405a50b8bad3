#pragma once

#include <string>
#include <vector>

#include "hhgen/activity/lexicon.hpp"
#include "hhgen/core/describe.hpp"
#include "hhgen/embed/provider.hpp"

namespace hhgen::activity {

/// strict drops in-home activities the environment cannot host; lenient
/// keeps them unbound for the environment side to satisfy.
enum class BindingMode { strict, lenient };

constexpr double kUnknownLabelMatch = 0.3;  // cosine needed to bind an unknown label to an object
constexpr std::size_t kMaxBoundObjects = 3;

struct Binding {
  std::string room{kUnbound};
  std::vector<std::string> objects;
  bool missing_objects = false;  // room found but none of its supporting objects
};

namespace detail {

inline bool someone_elses_bedroom(const Room& r, const std::string& member) {
  return r.function == RoomFunction::sleeping && r.owner && *r.owner != member;
}

inline std::vector<std::string> supporting_objects(const ActivityKind& kind, const EnvironmentSchema& env,
                                                   const std::string& room) {
  std::vector<std::string> out;
  for (const auto& o : env.objects) {
    if (o.room != room || out.size() >= kMaxBoundObjects) continue;
    const AssetRecord* a = env.find_asset(o.asset);
    if (a && supports(kind, a->description)) out.push_back(o.id);
  }
  return out;
}

}  // namespace detail

/// Room and objects for an activity. Known labels prefer the member's own
/// bedroom, then rooms by function preference, then any room holding a
/// supporting object. Unknown labels bind to the most similar object when
/// an embedder is given.
inline Binding bind_activity(const Activity& a, const EnvironmentSchema& env, const embed::EmbeddingProvider* embed) {
  Binding b;
  const ActivityKind* kind = find_kind(a.label);
  if (kind) {
    if (kind->offsite) return b;
    std::vector<const Room*> candidates;
    auto push = [&](const Room& r) {
      if (detail::someone_elses_bedroom(r, a.member)) return;
      if (std::find(candidates.begin(), candidates.end(), &r) == candidates.end()) candidates.push_back(&r);
    };
    for (auto f : kind->rooms) {
      for (const auto& r : env.rooms)
        if (r.function == f && r.owner && *r.owner == a.member) push(r);
      for (const auto& r : env.rooms)
        if (r.function == f) push(r);
    }
    const std::size_t by_function = candidates.size();
    for (const auto& r : env.rooms)
      if (!detail::supporting_objects(*kind, env, r.id).empty()) push(r);
    if (candidates.empty()) return b;
    for (const Room* r : candidates) {
      auto objs = detail::supporting_objects(*kind, env, r->id);
      if (!objs.empty() || kind->assets.empty()) {
        b.room = r->id;
        b.objects = std::move(objs);
        return b;
      }
    }
    if (by_function > 0) {
      b.room = candidates.front()->id;
      b.missing_objects = true;
    }
    return b;
  }
  if (!embed || trim(a.label).empty()) return b;
  const auto q = embed->embed_text(a.label);
  double best = kUnknownLabelMatch;
  for (const auto& o : env.objects) {
    const AssetRecord* asset = env.find_asset(o.asset);
    const Room* room = env.find_room(o.room);
    if (!asset || !room || detail::someone_elses_bedroom(*room, a.member)) continue;
    const double s = stats::cosine(q, embed->embed_text(asset->description));
    if (s > best + 1e-12) {
      best = s;
      b.room = o.room;
      b.objects = {o.id};
    }
  }
  return b;
}

/// Canonical description of a bound activity, built from its label and the
/// room and objects it uses.
inline std::string activity_description(const Activity& a, const EnvironmentSchema* env) {
  if (is_offsite(a.label)) return a.label + " away from home";
  if (!env || a.unbound()) return a.label;
  const Room* room = env->find_room(a.room);
  const std::string where = room ? room->label : a.room;
  std::string out = a.label + (where.find("'s ") != std::string::npos ? " in " : " in the ") + where;
  std::vector<std::string> uses;
  for (const auto& id : a.objects) {
    const PlacedObject* o = env->find_object(id);
    const AssetRecord* asset = o ? env->find_asset(o->asset) : nullptr;
    if (asset) uses.push_back(asset->description);
  }
  if (!uses.empty()) out += " using the " + join(uses, " and the ");
  return out;
}

struct BindReport {
  ActivitySchedule schedule;
  std::vector<Activity> dropped;  // strict mode only
  std::vector<Activity> missing;  // unbound or object-missing in-home activities
};

inline BindReport bind_schedule(const ActivitySchedule& sched, const EnvironmentSchema& env,
                                const embed::EmbeddingProvider* embed, BindingMode mode) {
  BindReport rep;
  rep.schedule.horizon_days = sched.horizon_days;
  for (auto a : sched.activities) {
    const Binding b = bind_activity(a, env, embed);
    a.room = b.room;
    a.objects = b.objects;
    a.description = activity_description(a, &env);
    const bool unmet = !is_offsite(a.label) && (a.unbound() || b.missing_objects);
    if (unmet && mode == BindingMode::strict && a.unbound() && a.label != "sleep") {
      rep.dropped.push_back(a);
      continue;
    }
    if (unmet) rep.missing.push_back(a);
    rep.schedule.activities.push_back(std::move(a));
  }
  rep.schedule = normalized(std::move(rep.schedule));
  return rep;
}

}  // namespace hhgen::activity
