#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <queue>
#include <vector>

#include "hhgen/core/validate.hpp"
#include "hhgen/env/program.hpp"
#include "hhgen/util/rng.hpp"

namespace hhgen::env {

constexpr double kAreaTolerance = 0.25;
constexpr int kLayoutAttempts = 50;

/// Rooms i, j share a wall of at least the minimum door width.
inline bool adjacent(const Rect& a, const Rect& b) {
  auto w = shared_wall(a, b);
  return w && w->length() >= kMinDoorWidth - kGeomEps;
}

/// Connected components of the wall-adjacency graph, as a component index per room.
inline std::vector<int> adjacency_components(const std::vector<Rect>& rects) {
  std::vector<int> comp(rects.size(), -1);
  int next = 0;
  for (std::size_t s = 0; s < rects.size(); ++s) {
    if (comp[s] >= 0) continue;
    std::queue<std::size_t> q;
    q.push(s);
    comp[s] = next;
    while (!q.empty()) {
      const auto cur = q.front();
      q.pop();
      for (std::size_t o = 0; o < rects.size(); ++o)
        if (comp[o] < 0 && adjacent(rects[cur], rects[o])) {
          comp[o] = next;
          q.push(o);
        }
    }
    ++next;
  }
  return comp;
}

namespace detail {

inline void guillotine(const Rect& r, std::vector<std::size_t> idx, const std::vector<double>& area, Rng& rng,
                       std::vector<Rect>& out) {
  if (idx.size() == 1) {
    out[idx[0]] = r;
    return;
  }
  rng.shuffle(idx);
  double total = 0.0;
  for (auto i : idx) total += area[i];
  // Split point whose area share is closest to a jittered half.
  const double aim = rng.uniform(0.4, 0.6);
  std::size_t k = 1;
  double best = 1e300, acc = 0.0, share = 0.5;
  for (std::size_t m = 1; m < idx.size(); ++m) {
    acc += area[idx[m - 1]];
    if (std::abs(acc / total - aim) < best) {
      best = std::abs(acc / total - aim);
      k = m;
      share = acc / total;
    }
  }
  std::vector<std::size_t> left(idx.begin(), idx.begin() + static_cast<long>(k));
  std::vector<std::size_t> right(idx.begin() + static_cast<long>(k), idx.end());
  const bool cut_x = r.w > r.h * 1.15 || (r.w * 1.15 >= r.h && rng.chance(0.5));
  if (cut_x) {
    const double w0 = snap(r.w * share);
    guillotine({r.x, r.y, w0, r.h}, left, area, rng, out);
    guillotine({r.x + w0, r.y, r.w - w0, r.h}, right, area, rng, out);
  } else {
    const double h0 = snap(r.h * share);
    guillotine({r.x, r.y, r.w, h0}, left, area, rng, out);
    guillotine({r.x, r.y + h0, r.w, r.h - h0}, right, area, rng, out);
  }
}

}  // namespace detail

/// Randomized guillotine subdivision of a footprint anchored at the origin,
/// retried up to kLayoutAttempts times until every room is within 25% of
/// its target area, no side is under kMinRoomSide and the rooms form one
/// wall-adjacent group.
inline std::vector<Room> layout_rooms(const RoomProgram& program, const Bounds& bounds, std::uint64_t seed) {
  require(!program.entries.empty(), "layout needs at least one room");
  require(bounds.width > 0 && bounds.depth > 0, "bounds must be positive");
  const double total = program.total_area();
  if (total > kLayoutFill * bounds.area() + kGeomEps)
    fail(ErrorCode::layout_infeasible, "program needs " + fmt_fixed(total, 1) + " m2 but only " +
                                           fmt_fixed(kLayoutFill * bounds.area(), 1) + " m2 are usable");
  std::vector<double> area;
  for (const auto& e : program.entries) area.push_back(e.target_area);

  for (int attempt = 0; attempt < kLayoutAttempts; ++attempt) {
    Rng rng(seed * 1000003ULL + static_cast<std::uint64_t>(attempt));
    double w = std::min(bounds.width, snap_up(std::sqrt(total) * rng.uniform(0.85, 1.25)));
    double h = snap_up(total / w);
    if (h > bounds.depth + kGeomEps) {
      h = bounds.depth;
      w = snap_up(total / h);
    }
    if (w > bounds.width + kGeomEps) continue;
    std::vector<std::size_t> idx(area.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::vector<Rect> rects(area.size());
    detail::guillotine({0.0, 0.0, w, h}, idx, area, rng, rects);

    bool ok = true;
    for (std::size_t i = 0; i < rects.size() && ok; ++i) {
      const double a = rects[i].area();
      ok = std::min(rects[i].w, rects[i].h) >= kMinRoomSide - kGeomEps &&
           std::abs(a - area[i]) <= kAreaTolerance * area[i] + kGeomEps;
    }
    if (!ok) continue;
    const auto comp = adjacency_components(rects);
    if (std::any_of(comp.begin(), comp.end(), [](int c) { return c != 0; })) continue;

    std::vector<Room> rooms;
    for (std::size_t i = 0; i < rects.size(); ++i) {
      const auto& e = program.entries[i];
      rooms.push_back({"r" + std::to_string(i), e.label, e.function, rects[i], e.owner});
    }
    return rooms;
  }
  fail(ErrorCode::layout_infeasible, "no layout found in " + std::to_string(kLayoutAttempts) + " attempts");
}

}  // namespace hhgen::env
