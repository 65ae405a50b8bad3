#pragma once

#include <algorithm>
#include <cmath>
#include <optional>

namespace hhgen {

/// Geometric tolerance in meters. Layout values live on a 0.1 m grid, so
/// anything below a micrometre is rounding noise.
constexpr double kGeomEps = 1e-6;
constexpr double kGrid = 0.1;

inline double snap(double v) { return std::round(v / kGrid) * kGrid; }
inline double snap_down(double v) { return std::floor(v / kGrid + kGeomEps) * kGrid; }
inline double snap_up(double v) { return std::ceil(v / kGrid - kGeomEps) * kGrid; }

inline bool near(double a, double b, double eps = kGeomEps) { return std::abs(a - b) <= eps; }

struct Point {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Point&) const = default;
};

/// Axis-aligned rectangle: (x, y) is the minimum corner, w along x, h along y.
struct Rect {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;

  double right() const { return x + w; }
  double top() const { return y + h; }
  double area() const { return w * h; }
  Point center() const { return {x + w / 2, y + h / 2}; }

  bool operator==(const Rect&) const = default;
};

inline bool same_rect(const Rect& a, const Rect& b, double eps = kGeomEps) {
  return near(a.x, b.x, eps) && near(a.y, b.y, eps) && near(a.w, b.w, eps) && near(a.h, b.h, eps);
}

/// Closed containment with tolerance.
inline bool contains(const Rect& outer, const Rect& inner, double eps = kGeomEps) {
  return inner.x >= outer.x - eps && inner.y >= outer.y - eps &&
         inner.right() <= outer.right() + eps && inner.top() <= outer.top() + eps;
}

/// Containment where the rectangles are not identical.
inline bool strictly_contains(const Rect& outer, const Rect& inner, double eps = kGeomEps) {
  return contains(outer, inner, eps) && !same_rect(outer, inner, eps);
}

inline double overlap_length(double a0, double a1, double b0, double b1) {
  return std::min(a1, b1) - std::max(a0, b0);
}

inline double intersection_area(const Rect& a, const Rect& b) {
  const double ox = overlap_length(a.x, a.right(), b.x, b.right());
  const double oy = overlap_length(a.y, a.top(), b.y, b.top());
  return (ox > 0 && oy > 0) ? ox * oy : 0.0;
}

/// Interiors overlap (touching edges do not count).
inline bool interiors_intersect(const Rect& a, const Rect& b, double eps = kGeomEps) {
  return overlap_length(a.x, a.right(), b.x, b.right()) > eps &&
         overlap_length(a.y, a.top(), b.y, b.top()) > eps;
}

struct Segment {
  Point a;
  Point b;

  double length() const { return std::hypot(b.x - a.x, b.y - a.y); }
  Point midpoint() const { return {(a.x + b.x) / 2, (a.y + b.y) / 2}; }
  bool vertical() const { return near(a.x, b.x); }

  bool operator==(const Segment&) const = default;
};

/// The boundary segment two interior-disjoint rectangles share, if it has
/// positive length. Endpoints are ordered by increasing coordinate.
inline std::optional<Segment> shared_wall(const Rect& a, const Rect& b) {
  auto vertical = [](double x, double y0, double y1) -> std::optional<Segment> {
    if (y1 - y0 <= kGeomEps) return std::nullopt;
    return Segment{{x, y0}, {x, y1}};
  };
  auto horizontal = [](double y, double x0, double x1) -> std::optional<Segment> {
    if (x1 - x0 <= kGeomEps) return std::nullopt;
    return Segment{{x0, y}, {x1, y}};
  };
  if (interiors_intersect(a, b)) return std::nullopt;
  const double y0 = std::max(a.y, b.y), y1 = std::min(a.top(), b.top());
  const double x0 = std::max(a.x, b.x), x1 = std::min(a.right(), b.right());
  if (near(a.right(), b.x)) return vertical(a.right(), y0, y1);
  if (near(b.right(), a.x)) return vertical(a.x, y0, y1);
  if (near(a.top(), b.y)) return horizontal(a.top(), x0, x1);
  if (near(b.top(), a.y)) return horizontal(a.y, x0, x1);
  return std::nullopt;
}

/// True when `s` is collinear with and inside `wall`.
inline bool segment_on(const Segment& s, const Segment& wall, double eps = kGeomEps) {
  if (wall.vertical()) {
    if (!near(s.a.x, wall.a.x, eps) || !near(s.b.x, wall.a.x, eps)) return false;
    const double lo = std::min(wall.a.y, wall.b.y), hi = std::max(wall.a.y, wall.b.y);
    return std::min(s.a.y, s.b.y) >= lo - eps && std::max(s.a.y, s.b.y) <= hi + eps;
  }
  if (!near(s.a.y, wall.a.y, eps) || !near(s.b.y, wall.a.y, eps)) return false;
  const double lo = std::min(wall.a.x, wall.b.x), hi = std::max(wall.a.x, wall.b.x);
  return std::min(s.a.x, s.b.x) >= lo - eps && std::max(s.a.x, s.b.x) <= hi + eps;
}

/// Centered sub-segment of `wall` with the given length (clipped to the wall).
inline Segment centered_subsegment(const Segment& wall, double length) {
  const double full = wall.length();
  const double len = std::min(length, full);
  const double offset = snap_down((full - len) / 2);
  if (wall.vertical()) {
    const double y0 = std::min(wall.a.y, wall.b.y) + offset;
    return Segment{{wall.a.x, y0}, {wall.a.x, y0 + len}};
  }
  const double x0 = std::min(wall.a.x, wall.b.x) + offset;
  return Segment{{x0, wall.a.y}, {x0 + len, wall.a.y}};
}

}  // namespace hhgen
