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

// Randomized snake models for collision tests.

#pragma once

#include "rsnake/snake.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <numbers>
#include <random>
#include <vector>

namespace support {

using namespace rsnake;

/// Jittered rings scattered over the metric's domain, `total` vertices in all. Vertices are
/// not required to form simple curves; collision detection does not care.
inline SnakeModel random_model(std::shared_ptr<const MetricField> metric, int total, std::uint64_t seed,
                               double delta) {
  ModelParams p;
  p.delta = delta;
  SnakeModel m = make_model(std::move(metric), p);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double w = m.width() - 1, h = m.height() - 1;
  int left = total;
  while (left > 0) {
    const int n = std::min(left, 3 + static_cast<int>(u(rng) * 120));
    Curve c;
    const Point o{w * (0.2 + 0.6 * u(rng)), h * (0.2 + 0.6 * u(rng))};
    const double r = 0.05 * w + 0.3 * w * u(rng);
    for (int i = 0; i < n; ++i) {
      const double a = 2.0 * std::numbers::pi * (i + 0.4 * u(rng)) / n;
      const double rr = r * (0.7 + 0.6 * u(rng));
      c.ring.push_back(m.make_vertex({std::clamp(o.x + rr * std::cos(a), 0.0, w), std::clamp(o.y + rr * std::sin(a), 0.0, h)}));
    }
    m.curves.push_back(std::move(c));
    left -= n;
  }
  m.d_max_last = u(rng) * delta;
  return m;
}

/// `n` vertices at uniform density over a square sized so that the mean number of vertices
/// per unit area stays `density`. Rings of 50 vertices each.
inline SnakeModel uniform_density_model(int n, double density, std::uint64_t seed, double delta) {
  const int side = std::max(8, static_cast<int>(std::ceil(std::sqrt(n / density))));
  ModelParams p;
  p.delta = delta;
  SnakeModel m = make_model(std::make_shared<const MetricField>(MetricField::identity(side, side)), p);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, side - 1.0);
  for (int k = 0; k < n; k += 50) {
    Curve c;
    for (int i = k; i < std::min(n, k + 50); ++i) c.ring.push_back(m.make_vertex({u(rng), u(rng)}));
    m.curves.push_back(std::move(c));
  }
  return m;
}

}  // namespace support
