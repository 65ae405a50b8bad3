#pragma once

#include <numeric>
#include <optional>
#include <vector>

#include "hhgen/core/validate.hpp"
#include "hhgen/env/doors.hpp"
#include "hhgen/env/layout.hpp"

namespace hhgen::env {

/// First grid position (row-major from the origin) where a w x h room fits
/// inside the bounds, overlaps no room except `skip`, and shares a door-
/// width wall with some other room.
inline std::optional<Rect> find_free_spot(const std::vector<Room>& rooms, const Bounds& bounds, double w, double h,
                                          std::optional<std::size_t> skip = std::nullopt) {
  const int nx = static_cast<int>(std::floor((bounds.width - w) / kGrid + kGeomEps));
  const int ny = static_cast<int>(std::floor((bounds.depth - h) / kGrid + kGeomEps));
  for (int iy = 0; iy <= ny; ++iy) {
    for (int ix = 0; ix <= nx; ++ix) {
      const Rect r{snap(ix * kGrid), snap(iy * kGrid), w, h};
      bool clear = true, touches = false;
      for (std::size_t i = 0; i < rooms.size() && clear; ++i) {
        if (skip && i == *skip) continue;
        if (interiors_intersect(r, rooms[i].rect)) clear = false;
        else touches = touches || adjacent(r, rooms[i].rect);
      }
      if (clear && touches) return r;
    }
  }
  return std::nullopt;
}

/// Moves every room that sits strictly inside another to free space next
/// to the house, carrying its objects along. If it does not fit at full
/// size it is shrunk in 10% steps down to the minimum usable room first.
/// Doors of a moved room are dropped; connectivity repair re-links it.
inline EnvironmentSchema fix_nested_rooms(EnvironmentSchema env) {
  for (std::size_t i = 0; i < env.rooms.size(); ++i) {
    bool nested = false;
    for (std::size_t j = 0; j < env.rooms.size(); ++j)
      nested = nested || (i != j && strictly_contains(env.rooms[j].rect, env.rooms[i].rect));
    if (!nested) continue;

    Room& room = env.rooms[i];
    std::optional<Rect> spot;
    double w = room.rect.w, h = room.rect.h;
    while (!spot) {
      spot = find_free_spot(env.rooms, env.bounds, w, h, i);
      if (!spot && w != h) spot = find_free_spot(env.rooms, env.bounds, h, w, i);
      if (spot) break;
      const double nw = snap_down(w * 0.9), nh = snap_down(h * 0.9);
      if (nw * nh < kMinRoomArea - kGeomEps || std::min(nw, nh) < kMinRoomSide - kGeomEps)
        fail(ErrorCode::layout_infeasible, "no free space to relocate nested room " + room.id);
      w = nw;
      h = nh;
    }
    const double dx = spot->x - room.rect.x, dy = spot->y - room.rect.y;
    const bool resized = !near(spot->w, room.rect.w) || !near(spot->h, room.rect.h);
    room.rect = *spot;
    std::vector<PlacedObject> kept;
    std::set<std::string> dropped;
    for (auto& o : env.objects) {
      if (o.room == room.id) {
        o.pose.x += dx;
        o.pose.y += dy;
        const auto fp = env.object_footprint(o);
        if (resized && (!fp || !contains(room.rect, *fp))) {
          dropped.insert(o.id);
          continue;
        }
      }
      kept.push_back(o);
    }
    std::erase_if(kept, [&](const PlacedObject& o) {
      return o.support.kind == SupportKind::surface_of && dropped.count(o.support.host);
    });
    env.objects = std::move(kept);
    std::erase_if(env.doors, [&](const Door& d) { return d.room_a == room.id || d.room_b == room.id; });
  }
  return env;
}

/// Adds standard doors along shared walls until the door graph is
/// connected, joining components in room order (a spanning tree over the
/// component graph, so exactly components - 1 doors).
inline EnvironmentSchema ensure_connectivity(EnvironmentSchema env) {
  const std::size_t n = env.rooms.size();
  if (n <= 1) return env;
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < n; ++i) index[env.rooms[i].id] = i;
  for (const auto& d : env.doors) {
    auto a = index.find(d.room_a), b = index.find(d.room_b);
    if (a != index.end() && b != index.end()) parent[find(a->second)] = find(b->second);
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (find(i) == find(j)) continue;
      if (auto door = make_door(env.rooms[i], env.rooms[j], DoorKind::standard)) {
        env.doors.push_back(*door);
        parent[find(i)] = find(j);
      }
    }
  }
  for (std::size_t i = 1; i < n; ++i)
    if (find(i) != find(0))
      fail(ErrorCode::unrepairable, "room " + env.rooms[i].id + " shares no wall with the rest of the house");
  return env;
}

}  // namespace hhgen::env
