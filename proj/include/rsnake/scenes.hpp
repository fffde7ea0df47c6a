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

/**
 * @file scenes.hpp
 * @brief Synthetic test scenes described by signed distance functions, with their
 *        analytic boundaries.
 */

#pragma once

#include "rsnake/image.hpp"
#include "rsnake/polygon.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

namespace rsnake {

/// Signed distance, negative inside.
using Sdf = std::function<double(Point)>;

inline Sdf sdf_disk(Point c, double r) {
  return [=](Point p) { return distance(p, c) - r; };
}

/// Axis-aligned square of half side `h` whose corners are rounded with radius `r`.
inline Sdf sdf_rounded_square(Point c, double h, double r) {
  return [=](Point p) {
    const double qx = std::abs(p.x - c.x) - h + r;
    const double qy = std::abs(p.y - c.y) - h + r;
    const double outside = std::hypot(std::max(qx, 0.0), std::max(qy, 0.0));
    return outside + std::min(std::max(qx, qy), 0.0) - r;
  };
}

/// Segment [a, b] thickened to half width `w` (round caps).
inline Sdf sdf_capsule(Point a, Point b, double w) {
  return [=](Point p) { return point_segment_distance(p, a, b) - w; };
}

inline Sdf sdf_annulus(Point c, double r_in, double r_out) {
  return [=](Point p) {
    const double d = distance(p, c);
    return std::max(d - r_out, r_in - d);
  };
}

inline Sdf sdf_union(std::vector<Sdf> parts) {
  return [parts = std::move(parts)](Point p) {
    double d = std::numeric_limits<double>::infinity();
    for (const Sdf &s : parts) d = std::min(d, s(p));
    return d;
  };
}

/// Antialiased rendering with the same linear edge ramp as gen_disk.
inline GrayImage render_sdf(int width, int height, const Sdf &sdf, double fg, double bg, double edge_blur = 1.0) {
  GrayImage img(width, height);
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) img(x, y) = detail::shade(sdf({double(x), double(y)}), fg, bg, edge_blur);
  return img;
}

/// Closed outline of a rounded square, counter-clockwise in image coordinates (positive
/// shoelace area), sampled every `step` pixels or finer.
inline std::vector<Point> rounded_square_outline(Point c, double h, double r, double step = 0.25) {
  std::vector<Point> out;
  const double straight = 2.0 * (h - r);
  const int n_line = std::max(1, static_cast<int>(std::ceil(straight / step)));
  const int n_arc = std::max(2, static_cast<int>(std::ceil(0.5 * std::numbers::pi * r / step)));
  // corner centers in traversal order; each side runs from the end of one arc to the next
  const Point corners[4] = {{c.x + h - r, c.y + h - r}, {c.x - h + r, c.y + h - r}, {c.x - h + r, c.y - h + r},
                            {c.x + h - r, c.y - h + r}};
  for (int k = 0; k < 4; ++k) {
    const double a0 = k * 0.5 * std::numbers::pi;
    for (int i = 0; i < n_arc; ++i) {
      const double a = a0 + 0.5 * std::numbers::pi * i / n_arc;
      out.push_back({corners[k].x + r * std::cos(a), corners[k].y + r * std::sin(a)});
    }
    const double a1 = a0 + 0.5 * std::numbers::pi;
    const Point from{corners[k].x + r * std::cos(a1), corners[k].y + r * std::sin(a1)};
    const Point to = corners[(k + 1) % 4] + Vec2{r * std::cos(a1), r * std::sin(a1)};
    for (int i = 0; i < n_line; ++i) out.push_back(from + (to - from) * (static_cast<double>(i) / n_line));
  }
  return out;
}

/// Ellipse outline, positive area.
inline std::vector<Point> ellipse_outline(Point c, double a, double b, double angle, int count) {
  std::vector<Point> out;
  for (int i = 0; i < count; ++i) out.push_back(ellipse_point(c, a, b, angle, 2.0 * std::numbers::pi * i / count));
  return out;
}

// ---------------------------------------------------------------------------
// Vessel-like trees
// ---------------------------------------------------------------------------

struct Stroke {
  Point a;
  Point b;
  double half_width;
};

struct VesselTree {
  std::vector<Stroke> strokes;
  Point root;  ///< inside the widest stroke
};

/// Random binary tree of straight strokes. Each level halves the length budget and narrows
/// the width; branch angles are drawn from the seeded generator.
inline VesselTree gen_vessel_tree(Point root, double heading, double length, double half_width, int depth,
                                  std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> spread(0.35, 0.75);
  std::uniform_real_distribution<double> shrink(0.65, 0.8);
  VesselTree t;
  t.root = root;
  struct Item {
    Point p;
    double heading, length, width;
    int depth;
  };
  std::vector<Item> stack{{root, heading, length, half_width, depth}};
  while (!stack.empty()) {
    const Item it = stack.back();
    stack.pop_back();
    const Point end{it.p.x + it.length * std::cos(it.heading), it.p.y + it.length * std::sin(it.heading)};
    t.strokes.push_back({it.p, end, it.width});
    if (it.depth <= 1) continue;
    const double l = it.length * shrink(rng);
    const double w = std::max(1.5, it.width * shrink(rng));
    stack.push_back({end, it.heading - spread(rng), l, w, it.depth - 1});
    stack.push_back({end, it.heading + spread(rng), l, w, it.depth - 1});
  }
  return t;
}

inline Sdf sdf_vessel_tree(const VesselTree &t) {
  std::vector<Sdf> parts;
  for (const Stroke &s : t.strokes) parts.push_back(sdf_capsule(s.a, s.b, s.half_width));
  return sdf_union(std::move(parts));
}

/// 8-connected component labeling of pixels where `mask` is true. Returns the number of
/// components; `labels` receives 1-based labels (0 = background).
inline int label_components(const GrayImage &img, double threshold, std::vector<int> *labels = nullptr) {
  const int w = img.width();
  const int h = img.height();
  std::vector<int> lab(static_cast<std::size_t>(w) * h, 0);
  int count = 0;
  std::vector<std::pair<int, int>> stack;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      if (img(x, y) <= threshold || lab[static_cast<std::size_t>(y) * w + x]) continue;
      ++count;
      stack.assign(1, {x, y});
      lab[static_cast<std::size_t>(y) * w + x] = count;
      while (!stack.empty()) {
        const auto [cx, cy] = stack.back();
        stack.pop_back();
        for (int dy = -1; dy <= 1; ++dy)
          for (int dx = -1; dx <= 1; ++dx) {
            const int nx = cx + dx;
            const int ny = cy + dy;
            if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
            const std::size_t k = static_cast<std::size_t>(ny) * w + nx;
            if (lab[k] || img(nx, ny) <= threshold) continue;
            lab[k] = count;
            stack.push_back({nx, ny});
          }
      }
    }
  if (labels) *labels = std::move(lab);
  return count;
}

}  // namespace rsnake
