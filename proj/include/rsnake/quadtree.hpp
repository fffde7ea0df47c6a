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
#include <array>
#include <memory>
#include <span>
#include <utility>
#include <vector>

namespace rsnake {

/// Point quadtree over a fixed square region, answering disk range queries.
///
/// Leaves hold up to LeafCapacity points and split on overflow until MaxDepth, after which
/// they grow unbounded (coincident points).
template <typename Id, int LeafCapacity = 8, int MaxDepth = 16>
class PointQuadtree {
 public:
  /// Covers the axis-aligned bounding square of `points`.
  PointQuadtree(std::span<const Point> points, std::span<const Id> ids) {
    Point lo{0, 0}, hi{1, 1};
    if (!points.empty()) {
      lo = hi = points[0];
      for (const Point &p : points) {
        lo.x = std::min(lo.x, p.x);
        lo.y = std::min(lo.y, p.y);
        hi.x = std::max(hi.x, p.x);
        hi.y = std::max(hi.y, p.y);
      }
    }
    const double side = std::max({hi.x - lo.x, hi.y - lo.y, 1e-9});
    root_ = std::make_unique<Node>(lo, side * (1.0 + 1e-9) + 1e-9);
    for (std::size_t i = 0; i < points.size(); ++i) insert(points[i], ids[i]);
  }

  void insert(const Point &p, const Id &id) { root_->insert({p, id}, 0); ++size_; }

  std::size_t size() const noexcept { return size_; }

  /// Calls visit(point, id) for every stored point within `radius` of `center` (inclusive).
  template <typename Visit>
  void query_radius(const Point &center, double radius, Visit &&visit) const {
    root_->query(center, radius, radius * radius, visit);
  }

  std::vector<Id> query_radius(const Point &center, double radius) const {
    std::vector<Id> out;
    query_radius(center, radius, [&](const Point &, const Id &id) { out.push_back(id); });
    return out;
  }

 private:
  struct Entry {
    Point p;
    Id id;
  };

  struct Node {
    Node(Point origin, double side) : origin(origin), side(side) {}

    Point origin;  // lower corner
    double side;
    std::vector<Entry> entries;
    std::array<std::unique_ptr<Node>, 4> children;

    bool leaf() const { return !children[0]; }

    int quadrant(const Point &p) const {
      const double half = 0.5 * side;
      return (p.x >= origin.x + half ? 1 : 0) + (p.y >= origin.y + half ? 2 : 0);
    }

    void insert(Entry e, int depth) {
      if (leaf()) {
        entries.push_back(std::move(e));
        if (static_cast<int>(entries.size()) > LeafCapacity && depth < MaxDepth) split(depth);
        return;
      }
      children[quadrant(e.p)]->insert(std::move(e), depth + 1);
    }

    void split(int depth) {
      const double half = 0.5 * side;
      for (int q = 0; q < 4; ++q)
        children[q] = std::make_unique<Node>(Point{origin.x + (q & 1 ? half : 0.0), origin.y + (q & 2 ? half : 0.0)},
                                             half);
      std::vector<Entry> old;
      old.swap(entries);
      for (Entry &e : old) children[quadrant(e.p)]->insert(std::move(e), depth + 1);
    }

    template <typename Visit>
    void query(const Point &c, double r, double r2, Visit &visit) const {
      // Distance from the query center to this node's square.
      const double dx = std::max({origin.x - c.x, 0.0, c.x - (origin.x + side)});
      const double dy = std::max({origin.y - c.y, 0.0, c.y - (origin.y + side)});
      if (dx * dx + dy * dy > r2) return;
      if (leaf()) {
        for (const Entry &e : entries) {
          const double ex = e.p.x - c.x;
          const double ey = e.p.y - c.y;
          if (ex * ex + ey * ey <= r2) visit(e.p, e.id);
        }
        return;
      }
      for (const auto &child : children) child->query(c, r, r2, visit);
    }
  };

  std::unique_ptr<Node> root_;
  std::size_t size_ = 0;
};

}  // namespace rsnake
