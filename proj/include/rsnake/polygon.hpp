/*
 * rsnake: resolution-adaptive deformable contours
 *
 * Copyright 2026 The rsnake Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include "rsnake/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

namespace rsnake {

/// Shoelace area; positive when the interior lies on the left of the traversal.
inline double signed_area(std::span<const Point> poly) {
  double a = 0.0;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) a += cross(poly[i], poly[(i + 1) % n]);
  return 0.5 * a;
}

inline Point centroid(std::span<const Point> poly) {
  Point c;
  for (const Point &p : poly) c += p;
  return poly.empty() ? c : c / static_cast<double>(poly.size());
}

/// Even-odd rule.
inline bool point_in_polygon(const Point &p, std::span<const Point> poly) {
  bool inside = false;
  const std::size_t n = poly.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point &a = poly[i];
    const Point &b = poly[j];
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < x) inside = !inside;
    }
  }
  return inside;
}

namespace detail {

inline int orient(const Point &a, const Point &b, const Point &c) {
  const double v = cross(b - a, c - a);
  return v > 0 ? 1 : (v < 0 ? -1 : 0);
}

inline bool on_segment(const Point &a, const Point &b, const Point &p) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
         p.y <= std::max(a.y, b.y);
}

}  // namespace detail

inline bool segments_intersect(const Point &a, const Point &b, const Point &c, const Point &d) {
  const int o1 = detail::orient(a, b, c);
  const int o2 = detail::orient(a, b, d);
  const int o3 = detail::orient(c, d, a);
  const int o4 = detail::orient(c, d, b);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && detail::on_segment(a, b, c)) return true;
  if (o2 == 0 && detail::on_segment(a, b, d)) return true;
  if (o3 == 0 && detail::on_segment(c, d, a)) return true;
  if (o4 == 0 && detail::on_segment(c, d, b)) return true;
  return false;
}

/// True when no two non-adjacent edges of the closed polygon intersect.
inline bool is_simple(std::span<const Point> poly) {
  const std::size_t n = poly.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i) {
    const Point &a = poly[i];
    const Point &b = poly[(i + 1) % n];
    const double minx = std::min(a.x, b.x), maxx = std::max(a.x, b.x);
    const double miny = std::min(a.y, b.y), maxy = std::max(a.y, b.y);
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;
      const Point &c = poly[j];
      const Point &d = poly[(j + 1) % n];
      if (std::max(c.x, d.x) < minx || std::min(c.x, d.x) > maxx || std::max(c.y, d.y) < miny ||
          std::min(c.y, d.y) > maxy)
        continue;
      if (segments_intersect(a, b, c, d)) return false;
    }
  }
  return true;
}

/// True when edges of two closed polygons intersect.
inline bool polygons_cross(std::span<const Point> p, std::span<const Point> q) {
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = 0; j < q.size(); ++j)
      if (segments_intersect(p[i], p[(i + 1) % p.size()], q[j], q[(j + 1) % q.size()])) return true;
  return false;
}

inline double point_segment_distance(const Point &p, const Point &a, const Point &b) {
  const Vec2 ab = b - a;
  const double len2 = dot(ab, ab);
  if (len2 == 0.0) return distance(p, a);
  const double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
  return distance(p, a + ab * t);
}

/// Distance from a point to a set of closed polygons.
inline double distance_to_polygons(const Point &p, std::span<const std::vector<Point>> polys) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto &poly : polys)
    for (std::size_t i = 0; i < poly.size(); ++i)
      best = std::min(best, point_segment_distance(p, poly[i], poly[(i + 1) % poly.size()]));
  return best;
}

/// Points along every edge of the closed polygons, spaced at most `step` apart.
inline std::vector<Point> densify(std::span<const std::vector<Point>> polys, double step) {
  std::vector<Point> out;
  for (const auto &poly : polys)
    for (std::size_t i = 0; i < poly.size(); ++i) {
      const Point &a = poly[i];
      const Point &b = poly[(i + 1) % poly.size()];
      const int n = std::max(1, static_cast<int>(std::ceil(distance(a, b) / step)));
      for (int k = 0; k < n; ++k) out.push_back(a + (b - a) * (static_cast<double>(k) / n));
    }
  return out;
}

/// Symmetric Hausdorff distance between two sets of closed polygons, evaluated on
/// densified boundaries (sampling step 0.1 px).
inline double hausdorff_distance(std::span<const std::vector<Point>> a, std::span<const std::vector<Point>> b) {
  double h = 0.0;
  for (const Point &p : densify(a, 0.1)) h = std::max(h, distance_to_polygons(p, b));
  for (const Point &p : densify(b, 0.1)) h = std::max(h, distance_to_polygons(p, a));
  return h;
}

}  // namespace rsnake
