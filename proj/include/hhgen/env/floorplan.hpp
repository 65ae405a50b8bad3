#pragma once

// ASCII floor plan ("grid-txt"): one glyph per 0.5 m cell, north up,
// followed by a legend and the door list. Used in prompts and as an export
// format.

#include <cmath>
#include <string>

#include "hhgen/core/types.hpp"
#include "hhgen/util/text.hpp"

namespace hhgen::env {

inline char room_glyph(std::size_t i) {
  static const std::string glyphs = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789";
  return i < glyphs.size() ? glyphs[i] : '?';
}

inline std::string render_floorplan(const EnvironmentSchema& env, double cell = 0.5) {
  const int cols = static_cast<int>(std::ceil(env.bounds.width / cell - kGeomEps));
  const int rows = static_cast<int>(std::ceil(env.bounds.depth / cell - kGeomEps));
  std::string out = "# floorplan " + fmt_fixed(env.bounds.width, 1) + " x " + fmt_fixed(env.bounds.depth, 1) +
                    " m, cell " + fmt_fixed(cell, 1) + " m\n";
  out += "+" + std::string(static_cast<std::size_t>(cols), '-') + "+\n";
  for (int r = rows - 1; r >= 0; --r) {
    out += "|";
    const double cy = (r + 0.5) * cell;
    for (int c = 0; c < cols; ++c) {
      const double cx = (c + 0.5) * cell;
      char g = '.';
      for (std::size_t i = 0; i < env.rooms.size(); ++i) {
        const Rect& q = env.rooms[i].rect;
        if (cx > q.x && cx < q.right() && cy > q.y && cy < q.top()) {
          g = room_glyph(i);
          break;
        }
      }
      out.push_back(g);
    }
    out += "|\n";
  }
  out += "+" + std::string(static_cast<std::size_t>(cols), '-') + "+\n";
  out += "legend:\n";
  for (std::size_t i = 0; i < env.rooms.size(); ++i) {
    const auto& room = env.rooms[i];
    out += std::string(1, room_glyph(i)) + " " + room.id + " " + room.label + " (" +
           std::string(to_string(room.function)) + ")\n";
  }
  out += "doors:\n";
  for (const auto& d : env.doors) out += d.room_a + "-" + d.room_b + " " + std::string(to_string(d.kind)) + "\n";
  return out;
}

}  // namespace hhgen::env
