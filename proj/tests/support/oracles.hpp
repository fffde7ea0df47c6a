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

// Slow reference implementations used only by the tests. They share no code with the
// library beyond the image container.

#pragma once

#include "rsnake/image.hpp"
#include "rsnake/metric.hpp"
#include "rsnake/snake.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <queue>
#include <random>
#include <set>
#include <utility>
#include <vector>

namespace oracle {

using rsnake::GrayImage;
using rsnake::Point;

inline int mirror(int i, int n) {
  if (n == 1) return 0;
  // reflect with edge duplication, repeated until inside
  while (i < 0 || i >= n) i = i < 0 ? -i - 1 : 2 * n - 1 - i;
  return i;
}

/// Direct 2D convolution with the outer product of a sampled Gaussian truncated at
/// ceil(4 stddev), renormalized, mirror boundary. O(n^2 k^2).
inline GrayImage gaussian_blur_2d(const GrayImage &img, double stddev) {
  const int r = static_cast<int>(std::ceil(4.0 * stddev));
  if (r == 0) return img;
  std::vector<double> w1(2 * r + 1);
  for (int i = -r; i <= r; ++i) w1[i + r] = std::exp(-0.5 * i * i / (stddev * stddev));
  const double s1 = std::accumulate(w1.begin(), w1.end(), 0.0);
  GrayImage out(img.width(), img.height());
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x) {
      double acc = 0.0;
      for (int dy = -r; dy <= r; ++dy)
        for (int dx = -r; dx <= r; ++dx)
          acc += w1[dx + r] * w1[dy + r] * img(mirror(x + dx, img.width()), mirror(y + dy, img.height()));
      out(x, y) = acc / (s1 * s1);
    }
  return out;
}

/// Central differences inside, one-sided differences on the border.
inline std::pair<GrayImage, GrayImage> finite_gradient(const GrayImage &img) {
  const int w = img.width(), h = img.height();
  GrayImage gx(w, h), gy(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const int x0 = std::max(0, x - 1), x1 = std::min(w - 1, x + 1);
      const int y0 = std::max(0, y - 1), y1 = std::min(h - 1, y + 1);
      gx(x, y) = (img(x1, y) - img(x0, y)) / (x1 - x0);
      gy(x, y) = (img(x, y1) - img(x, y0)) / (y1 - y0);
    }
  return {gx, gy};
}

struct Tensor {
  GrayImage jxx, jxy, jyy;
};

/// Per-pixel assembly of the structure tensor with brute-force convolutions.
inline Tensor structure_tensor(const GrayImage &img, double sigma, double rho) {
  const auto [gx, gy] = finite_gradient(gaussian_blur_2d(img, sigma));
  GrayImage xx(img.width(), img.height()), xy = xx, yy = xx;
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x) {
      xx(x, y) = gx(x, y) * gx(x, y);
      xy(x, y) = gx(x, y) * gy(x, y);
      yy(x, y) = gy(x, y) * gy(x, y);
    }
  return {gaussian_blur_2d(xx, rho), gaussian_blur_2d(xy, rho), gaussian_blur_2d(yy, rho)};
}

/// Riemannian length of [u, v] by a fine midpoint rule over an independent bilinear
/// interpolation of the stored coefficients (no eigenvalue floor; the stored fields
/// already satisfy it at pixel centers).
inline double dense_length(const rsnake::MetricField &f, Point u, Point v, double step = 0.01) {
  if (f.is_identity) return std::hypot(v.x - u.x, v.y - u.y);
  auto bil = [](const GrayImage &g, double x, double y) {
    x = std::clamp(x, 0.0, g.width() - 1.0);
    y = std::clamp(y, 0.0, g.height() - 1.0);
    const int x0 = std::min(static_cast<int>(std::floor(x)), g.width() - 2);
    const int y0 = std::min(static_cast<int>(std::floor(y)), g.height() - 2);
    const double fx = x - x0, fy = y - y0;
    return (1 - fx) * (1 - fy) * g(x0, y0) + fx * (1 - fy) * g(x0 + 1, y0) + (1 - fx) * fy * g(x0, y0 + 1) +
           fx * fy * g(x0 + 1, y0 + 1);
  };
  const double dx = v.x - u.x, dy = v.y - u.y;
  const double len = std::hypot(dx, dy);
  const int n = std::max(1, static_cast<int>(std::ceil(len / step)));
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    const double t = (i + 0.5) / n;
    const double x = u.x + t * dx, y = u.y + t * dy;
    const double q = bil(f.gxx, x, y) * dx * dx + 2 * bil(f.gxy, x, y) * dx * dy + bil(f.gyy, x, y) * dy * dy;
    acc += std::sqrt(std::max(q, 0.0));
  }
  return acc / n;
}

/// Shortest path between two pixel centers on the 8-connected pixel graph; each graph
/// edge costs its dense Riemannian length.
inline double dijkstra_geodesic(const rsnake::MetricField &f, int sx, int sy, int tx, int ty) {
  const int w = f.width(), h = f.height();
  std::vector<double> dist(static_cast<std::size_t>(w) * h, std::numeric_limits<double>::infinity());
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[sy * w + sx] = 0.0;
  pq.push({0.0, sy * w + sx});
  while (!pq.empty()) {
    const auto [d, k] = pq.top();
    pq.pop();
    if (d > dist[k]) continue;
    const int x = k % w, y = k / w;
    if (x == tx && y == ty) return d;
    for (int dy = -1; dy <= 1; ++dy)
      for (int dx = -1; dx <= 1; ++dx) {
        if (!dx && !dy) continue;
        const int nx = x + dx, ny = y + dy;
        if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
        const double nd = d + dense_length(f, {double(x), double(y)}, {double(nx), double(ny)}, 0.05);
        if (nd < dist[ny * w + nx]) {
          dist[ny * w + nx] = nd;
          pq.push({nd, ny * w + nx});
        }
      }
  }
  return std::numeric_limits<double>::infinity();
}

/// All non-neighbor vertex pairs (ring distance > 2 on a shared curve) whose chord
/// Riemannian length is within `threshold`, as (curve, index) pairs with a < b.
using Ref = std::pair<int, int>;
inline std::set<std::pair<Ref, Ref>> all_pairs_collisions(const rsnake::SnakeModel &m, double threshold) {
  std::vector<Ref> refs;
  std::vector<Point> pts;
  for (int c = 0; c < static_cast<int>(m.curves.size()); ++c)
    for (int i = 0; i < static_cast<int>(m.curves[c].size()); ++i) {
      refs.push_back({c, i});
      pts.push_back(m.curves[c].ring[i].pos);
    }
  std::set<std::pair<Ref, Ref>> out;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      if (refs[i].first == refs[j].first) {
        const int n = static_cast<int>(m.curves[refs[i].first].size());
        const int d = std::abs(refs[i].second - refs[j].second);
        if (std::min(d, n - d) <= 2) continue;
      }
      if (rsnake::riemannian_edge_length(*m.metric, pts[i], pts[j]) <= threshold)
        out.insert({std::min(refs[i], refs[j]), std::max(refs[i], refs[j])});
    }
  return out;
}

/// Winding number of a closed polygon around p (nonzero means inside).
inline int winding_number(Point p, const std::vector<Point> &poly) {
  int wn = 0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Point a = poly[i], b = poly[(i + 1) % poly.size()];
    const double side = (b.x - a.x) * (p.y - a.y) - (p.x - a.x) * (b.y - a.y);
    if (a.y <= p.y) {
      if (b.y > p.y && side > 0) ++wn;
    } else if (b.y <= p.y && side < 0) {
      --wn;
    }
  }
  return wn;
}

/// Number of 8-connected components of pixels above `threshold`, by union-find.
inline int count_components(const GrayImage &img, double threshold) {
  const int w = img.width(), h = img.height();
  std::vector<int> parent(static_cast<std::size_t>(w) * h);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int a) { return parent[a] == a ? a : parent[a] = find(parent[a]); };
  auto on = [&](int x, int y) { return img(x, y) > threshold; };
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      if (!on(x, y)) continue;
      for (const auto &[dx, dy] : {std::pair{-1, 0}, {-1, -1}, {0, -1}, {1, -1}}) {
        const int nx = x + dx, ny = y + dy;
        if (nx < 0 || ny < 0 || nx >= w || !on(nx, ny)) continue;
        parent[find(y * w + x)] = find(ny * w + nx);
      }
    }
  std::set<int> roots;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      if (on(x, y)) roots.insert(find(y * w + x));
  return static_cast<int>(roots.size());
}

inline GrayImage random_image(int w, int h, std::uint64_t seed, double lo = 0.0, double hi = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  GrayImage img(w, h);
  for (double &v : img.data()) v = u(rng);
  return img;
}

}  // namespace oracle
