#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hhgen/core/describe.hpp"
#include "hhgen/core/validate.hpp"
#include "hhgen/util/hash.hpp"
#include "hhgen/util/rng.hpp"
#include "hhgen/util/text.hpp"

namespace hhgen::env {

constexpr double kLargeFootprint = 0.8;  // m2; larger items go against a wall first
constexpr double kDoorClearance = 0.8;
constexpr double kOpenWallClearance = 0.6;

struct Unplaced {
  std::string room;
  std::string asset;
  std::string reason;
  bool operator==(const Unplaced&) const = default;
};

/// Asset lists per room id, in the order they should be placed.
using Selections = std::vector<std::pair<std::string, std::vector<AssetRecord>>>;

struct PlacementResult {
  EnvironmentSchema env;
  std::vector<Unplaced> unplaced;
  std::vector<std::string> placed;  // new object ids
};

inline bool is_wall_item(const AssetRecord& a) { return contains_phrase(a.description, "wall-mounted"); }
inline bool is_tabletop_item(const AssetRecord& a) { return contains_phrase(a.description, "tabletop"); }

inline bool is_surface_host(const AssetRecord& a) {
  if (is_tabletop_item(a) || is_wall_item(a)) return false;
  for (const char* k : {"table", "desk", "counter", "nightstand", "dresser", "stand", "sideboard", "worktop"})
    if (contains_phrase(a.description, k)) return true;
  return false;
}

inline std::string next_object_id(const EnvironmentSchema& env) {
  long best = 0;
  for (const auto& o : env.objects) {
    if (o.id.size() > 1 && o.id[0] == 'o') {
      try {
        best = std::max(best, std::stol(o.id.substr(1)));
      } catch (const std::exception&) {
      }
    }
  }
  return "o" + std::to_string(best + 1);
}

/// Floor zones in front of each door of `room` that must stay clear.
inline std::vector<Rect> door_zones(const EnvironmentSchema& env, const Room& room) {
  std::vector<Rect> zones;
  for (const auto& d : env.doors) {
    if (d.room_a != room.id && d.room_b != room.id) continue;
    const double depth = d.kind == DoorKind::open_wall ? kOpenWallClearance : kDoorClearance;
    const Segment& s = d.segment;
    if (s.vertical()) {
      const double y0 = std::min(s.a.y, s.b.y), len = std::abs(s.b.y - s.a.y);
      if (near(s.a.x, room.rect.x)) zones.push_back({s.a.x, y0, depth, len});
      else zones.push_back({s.a.x - depth, y0, depth, len});
    } else {
      const double x0 = std::min(s.a.x, s.b.x), len = std::abs(s.b.x - s.a.x);
      if (near(s.a.y, room.rect.y)) zones.push_back({x0, s.a.y, len, depth});
      else zones.push_back({x0, s.a.y - depth, len, depth});
    }
  }
  return zones;
}

/// Pose putting the asset's footprint min corner at (x, y) for the given yaw.
inline Pose pose_for_corner(const AssetRecord& a, double x, double y, double yaw) {
  const Rect r0 = footprint(a, {0.0, 0.0, yaw});
  return {x - r0.x, y - r0.y, yaw};
}

namespace detail {

struct RoomState {
  const Room* room = nullptr;
  std::vector<Rect> floor;
  std::vector<Rect> wall;
  std::vector<Rect> zones;
  std::map<std::string, std::vector<Rect>> surface;  // host id -> items on it
};

inline bool free_of(const Rect& r, const std::vector<Rect>& taken) {
  for (const auto& t : taken)
    if (interiors_intersect(r, t)) return false;
  return true;
}

/// Candidate corner positions along one wall; wall 0..3 = south, north, west, east.
inline std::vector<std::pair<Rect, double>> wall_slots(const Rect& room, const AssetRecord& a, int wall) {
  static const double yaws[4] = {0.0, 180.0, 90.0, 270.0};
  const double yaw = yaws[wall];
  const Rect fp = footprint(a, {0.0, 0.0, yaw});
  std::vector<std::pair<Rect, double>> out;
  const bool horizontal = wall < 2;
  const double span = horizontal ? room.w - fp.w : room.h - fp.h;
  if (span < -kGeomEps) return out;
  const int steps = static_cast<int>(std::floor(span / kGrid + kGeomEps));
  for (int s = 0; s <= steps; ++s) {
    const double t = s * kGrid;
    Rect r = fp;
    if (horizontal) {
      r.x = room.x + t;
      r.y = wall == 0 ? room.y : room.top() - fp.h;
    } else {
      r.y = room.y + t;
      r.x = wall == 2 ? room.x : room.right() - fp.w;
    }
    out.emplace_back(r, yaw);
  }
  return out;
}

}  // namespace detail

/// Greedy grid placement. Per room: large items flush against a wall first,
/// then other floor items anywhere, wall-mounted items along walls, and
/// tabletop items on a free spot of a table-like host (floor if none).
/// Floor footprints stay disjoint and out of door clearance zones. Items
/// that fit nowhere are reported, not fatal. The seed only rotates scan
/// order, so replays are identical.
inline PlacementResult place_objects(EnvironmentSchema env, const Selections& selections, std::uint64_t seed) {
  PlacementResult res;
  std::map<std::string, detail::RoomState> state;
  auto state_for = [&](const Room& room) -> detail::RoomState& {
    auto [it, fresh] = state.try_emplace(room.id);
    if (fresh) {
      it->second.room = &room;
      it->second.zones = door_zones(env, room);
      for (const auto& o : env.objects) {
        if (o.room != room.id) continue;
        const auto fp = env.object_footprint(o);
        if (!fp) continue;
        if (o.support.kind == SupportKind::floor) it->second.floor.push_back(*fp);
        else if (o.support.kind == SupportKind::wall) it->second.wall.push_back(*fp);
        else it->second.surface[o.support.host].push_back(*fp);
      }
    }
    return it->second;
  };

  for (const auto& [room_id, assets] : selections) {
    const Room* room = env.find_room(room_id);
    if (!room) {
      for (const auto& a : assets) res.unplaced.push_back({room_id, a.id, "unknown room"});
      continue;
    }
    // env.rooms is not modified below, so the pointer stays valid.
    auto& st = state_for(*room);
    Rng rng(seed ^ fnv1a64(room_id));

    std::vector<AssetRecord> order = assets;
    auto rank = [](const AssetRecord& a) {
      if (is_wall_item(a)) return 2;
      if (is_tabletop_item(a)) return 3;
      return a.footprint_area() > kLargeFootprint ? 0 : 1;
    };
    std::stable_sort(order.begin(), order.end(), [&](const AssetRecord& a, const AssetRecord& b) {
      if (rank(a) != rank(b)) return rank(a) < rank(b);
      if (a.footprint_area() != b.footprint_area()) return a.footprint_area() > b.footprint_area();
      return a.id < b.id;
    });

    for (const auto& a : order) {
      std::optional<PlacedObject> placed;
      Rect placed_fp;
      const std::string oid = next_object_id(env);
      auto try_floor_at = [&](const Rect& r, double yaw) {
        if (!contains(room->rect, r) || !detail::free_of(r, st.floor) || !detail::free_of(r, st.zones)) return false;
        placed = PlacedObject{oid, a.id, room->id, pose_for_corner(a, r.x, r.y, yaw), {SupportKind::floor, {}}};
        placed_fp = r;
        return true;
      };
      auto try_walls = [&](bool floor_item) {
        const int first = static_cast<int>(rng.index(4));
        for (int k = 0; k < 4 && !placed; ++k) {
          const auto slots = detail::wall_slots(room->rect, a, (first + k) % 4);
          if (slots.empty()) continue;
          const std::size_t off = rng.index(slots.size());
          for (std::size_t s = 0; s < slots.size() && !placed; ++s) {
            const auto& [r, yaw] = slots[(off + s) % slots.size()];
            if (floor_item) {
              try_floor_at(r, yaw);
            } else if (contains(room->rect, r) && detail::free_of(r, st.wall) && detail::free_of(r, st.zones)) {
              placed = PlacedObject{oid, a.id, room->id, pose_for_corner(a, r.x, r.y, yaw), {SupportKind::wall, {}}};
              placed_fp = r;
            }
          }
        }
      };
      auto try_anywhere = [&] {
        for (double yaw : {0.0, 90.0}) {
          const Rect fp = footprint(a, {0.0, 0.0, yaw});
          const int nx = static_cast<int>(std::floor((room->rect.w - fp.w) / kGrid + kGeomEps));
          const int ny = static_cast<int>(std::floor((room->rect.h - fp.h) / kGrid + kGeomEps));
          if (nx < 0 || ny < 0) continue;
          const std::size_t cells = static_cast<std::size_t>(nx + 1) * static_cast<std::size_t>(ny + 1);
          const std::size_t off = rng.index(cells);
          for (std::size_t c = 0; c < cells && !placed; ++c) {
            const std::size_t idx = (off + c) % cells;
            const double x = room->rect.x + static_cast<double>(idx % static_cast<std::size_t>(nx + 1)) * kGrid;
            const double y = room->rect.y + static_cast<double>(idx / static_cast<std::size_t>(nx + 1)) * kGrid;
            try_floor_at({x, y, fp.w, fp.h}, yaw);
          }
          if (placed) return;
        }
      };
      auto try_surface = [&] {
        for (const auto& host : env.objects) {
          if (host.room != room->id || host.support.kind != SupportKind::floor) continue;
          const AssetRecord* ha = env.find_asset(host.asset);
          if (!ha || !is_surface_host(*ha)) continue;
          const Rect hr = footprint(*ha, host.pose);
          const Rect fp = footprint(a, {0.0, 0.0, 0.0});
          const int nx = static_cast<int>(std::floor((hr.w - fp.w) / kGrid + kGeomEps));
          const int ny = static_cast<int>(std::floor((hr.h - fp.h) / kGrid + kGeomEps));
          auto& taken = st.surface[host.id];
          for (int iy = 0; iy <= ny && !placed; ++iy) {
            for (int ix = 0; ix <= nx && !placed; ++ix) {
              const Rect r{hr.x + ix * kGrid, hr.y + iy * kGrid, fp.w, fp.h};
              if (!detail::free_of(r, taken)) continue;
              placed = PlacedObject{oid, a.id, room->id, pose_for_corner(a, r.x, r.y, 0.0), {SupportKind::surface_of, host.id}};
              placed_fp = r;
            }
          }
          if (placed) return;
        }
      };

      switch (rank(a)) {
        case 0: try_walls(true); if (!placed) try_anywhere(); break;
        case 1: try_anywhere(); break;
        case 2: try_walls(false); break;
        default: try_surface(); if (!placed) try_anywhere(); break;
      }
      if (!placed) {
        res.unplaced.push_back({room->id, a.id, "no free spot in " + room->label});
        continue;
      }
      switch (placed->support.kind) {
        case SupportKind::floor: st.floor.push_back(placed_fp); break;
        case SupportKind::wall: st.wall.push_back(placed_fp); break;
        case SupportKind::surface_of: st.surface[placed->support.host].push_back(placed_fp); break;
      }
      if (!env.find_asset(a.id)) env.assets.push_back(a);
      res.placed.push_back(placed->id);
      env.objects.push_back(std::move(*placed));
    }
  }
  res.env = with_description(std::move(env));
  return res;
}

}  // namespace hhgen::env
