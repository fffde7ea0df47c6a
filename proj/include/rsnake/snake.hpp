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
 * @file snake.hpp
 * @brief Topology-adaptive closed polygonal snake whose edge lengths are
 *        constrained in a Riemannian metric.
 *
 * Every edge (u, v) is kept within delta <= L_R(u, v) <= zeta * delta, where
 * L_R is the metric length of the chord. Non-neighbor vertices closer than
 * (zeta * delta + d_max) / 2 trigger topology surgery, d_max being the largest
 * vertex displacement of the previous step. Vertices follow damped Newtonian
 * dynamics; the velocity-quadratic metric correction is not modeled.
 */

#pragma once

#include "rsnake/image.hpp"
#include "rsnake/metric.hpp"
#include "rsnake/polygon.hpp"
#include "rsnake/quadtree.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <memory>
#include <numeric>
#include <optional>
#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace rsnake {

struct Vertex {
  Vec2 pos;
  Vec2 vel;
  Vec2 force;
  std::uint64_t id = 0;  ///< unique within a model; survives surgery, not resampling
};

/// Closed ring of vertices; the interior lies on the left of the traversal.
struct Curve {
  std::vector<Vertex> ring;

  std::size_t size() const noexcept { return ring.size(); }

  std::vector<Point> points() const {
    std::vector<Point> out;
    out.reserve(ring.size());
    for (const Vertex &v : ring) out.push_back(v.pos);
    return out;
  }

  double area() const { return signed_area(points()); }
};

struct ModelParams {
  double mass = 1.0;
  double damping = 0.5;  ///< gamma: fraction of velocity removed per step (dt = 1)
  double dt = 1.0;
  double d_cap = 0.0;    ///< per-step displacement cap; 0 means delta / 2
  /// Measure the displacement cap with the metric at the vertex instead of Euclidean length.
  bool riemannian_cap = true;

  double alpha = 0.2;  ///< tension toward the neighbor midpoint
  double beta = 0.0;   ///< attraction along the gradient of the potential
  double chi = 0.0;    ///< inflation along the outward normal
  bool use_tension = true;
  /// Keep the tangential parts of tension and attraction. Off, only their components along
  /// the vertex normal act, and vertex spacing along the curve is left to resampling.
  bool tangential_forces = true;
  bool use_attraction = true;
  bool use_inflation = true;
  bool use_damping = true;

  double tol = 0.05;  ///< rest threshold on the largest per-step displacement (pixels)
  int patience = 5;   ///< consecutive quiet steps required for convergence

  double zeta = 2.5;
  double delta = 10.0;

  int max_resample_passes = 32;
  int max_surgeries_per_step = 0;  ///< 0 means the vertex count at the start of the step

  double displacement_cap() const { return d_cap > 0.0 ? d_cap : 0.5 * delta; }

  void validate() const {
    if (!(mass > 0.0)) throw ParameterError("mass must be > 0");
    if (!(damping >= 0.0)) throw ParameterError("damping must be >= 0");
    if (!(dt > 0.0)) throw ParameterError("dt must be > 0");
    if (!(d_cap >= 0.0)) throw ParameterError("d_cap must be >= 0");
    if (patience < 1) throw ParameterError("patience must be >= 1");
    if (!(zeta > 2.0)) throw ParameterError("zeta must be greater than 2");
    if (!(delta > 0.0)) throw ParameterError("delta must be > 0");
  }
};

struct SnakeModel {
  std::vector<Curve> curves;
  ModelParams params;
  std::shared_ptr<const MetricField> metric;
  int iteration = 0;
  std::uint64_t next_id = 1;
  double d_max_last = 0.0;            ///< largest displacement of the last step, in the cap's norm
  double d_max_euclidean_last = 0.0;  ///< same, in pixels

  Vertex make_vertex(Point pos, Vec2 vel = {}) { return {pos, vel, {}, next_id++}; }

  int width() const { return metric->width(); }
  int height() const { return metric->height(); }

  std::size_t vertex_count() const {
    std::size_t n = 0;
    for (const Curve &c : curves) n += c.size();
    return n;
  }

  std::vector<std::vector<Point>> polygons() const {
    std::vector<std::vector<Point>> out;
    for (const Curve &c : curves) out.push_back(c.points());
    return out;
  }
};

inline SnakeModel make_model(std::shared_ptr<const MetricField> metric, const ModelParams &params) {
  if (!metric) throw ParameterError("snake model needs a metric field");
  params.validate();
  SnakeModel m;
  m.metric = std::move(metric);
  m.params = params;
  return m;
}

inline double edge_length_r(const SnakeModel &m, const Point &a, const Point &b) {
  return riemannian_edge_length(*m.metric, a, b);
}

// ---------------------------------------------------------------------------
// Resampling
// ---------------------------------------------------------------------------

struct ResampleStats {
  int passes = 0;
  int contractions = 0;
  int splits = 0;
  int removed_curves = 0;
  bool fixpoint = true;
};

namespace detail {

inline Vertex merge_vertices(SnakeModel &m, const Vertex &a, const Vertex &b) {
  return m.make_vertex(midpoint(a.pos, b.pos), midpoint(a.vel, b.vel));
}

// One contraction sweep over non-adjacent short edges, shortest first. Returns the number
// of contractions.
inline int contract_short_edges(SnakeModel &m, Curve &c, double delta) {
  const MetricField &metric = *m.metric;
  const std::size_t n = c.size();
  if (n == 0) return 0;
  std::vector<double> len(n);
  for (std::size_t i = 0; i < n; ++i)
    len[i] = riemannian_edge_length(metric, c.ring[i].pos, c.ring[(i + 1) % n].pos);
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < n; ++i)
    if (len[i] < delta) order.push_back(i);
  if (order.empty()) return 0;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return len[a] < len[b]; });

  // vertex i is consumed by edge i (i, i+1) or edge i-1 (i-1, i)
  std::vector<char> chosen(n, 0), used(n, 0);
  int count = 0;
  for (std::size_t e : order) {
    const std::size_t a = e;
    const std::size_t b = (e + 1) % n;
    if (a == b || used[a] || used[b]) continue;
    chosen[e] = 1;
    used[a] = used[b] = 1;
    ++count;
  }
  std::vector<Vertex> out;
  out.reserve(n - count);
  // Start from a vertex that does not begin a contraction wrapping past the end.
  std::size_t start = 0;
  if (chosen[n - 1]) start = 1;
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t i = (start + k) % n;
    if (chosen[i]) {
      out.push_back(merge_vertices(m, c.ring[i], c.ring[(i + 1) % n]));
      ++k;  // skip the partner
    } else {
      out.push_back(c.ring[i]);
    }
  }
  c.ring = std::move(out);
  return count;
}

inline int split_long_edges(SnakeModel &m, Curve &c, double max_len) {
  const MetricField &metric = *m.metric;
  const std::size_t n = c.size();
  std::vector<Vertex> out;
  out.reserve(2 * n);
  int count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vertex &a = c.ring[i];
    const Vertex &b = c.ring[(i + 1) % n];
    out.push_back(a);
    if (riemannian_edge_length(metric, a.pos, b.pos) > max_len) {
      out.push_back(merge_vertices(m, a, b));
      ++count;
    }
  }
  c.ring = std::move(out);
  return count;
}

}  // namespace detail

/// Contract edges shorter than delta and split edges longer than zeta * delta, repeating
/// until nothing changes or the pass limit is hit. Curves left with fewer than three
/// vertices are removed.
inline ResampleStats resample(SnakeModel &m) {
  ResampleStats st;
  const double delta = m.params.delta;
  const double max_len = m.params.zeta * delta;
  for (;;) {
    if (st.passes >= m.params.max_resample_passes) {
      st.fixpoint = false;
      break;
    }
    ++st.passes;
    int changes = 0;
    for (Curve &c : m.curves) {
      const int k = detail::contract_short_edges(m, c, delta);
      st.contractions += k;
      changes += k;
    }
    const auto before = m.curves.size();
    std::erase_if(m.curves, [](const Curve &c) { return c.size() < 3; });
    st.removed_curves += static_cast<int>(before - m.curves.size());
    changes += static_cast<int>(before - m.curves.size());
    for (Curve &c : m.curves) {
      const int k = detail::split_long_edges(m, c, max_len);
      st.splits += k;
      changes += k;
    }
    if (changes == 0) break;
  }
  return st;
}

/// Riemannian lengths of all edges of the model.
inline std::vector<double> edge_lengths_r(const SnakeModel &m) {
  std::vector<double> out;
  for (const Curve &c : m.curves)
    for (std::size_t i = 0; i < c.size(); ++i)
      out.push_back(edge_length_r(m, c.ring[i].pos, c.ring[(i + 1) % c.size()].pos));
  return out;
}

inline std::vector<double> edge_lengths_e(const SnakeModel &m) {
  std::vector<double> out;
  for (const Curve &c : m.curves)
    for (std::size_t i = 0; i < c.size(); ++i) out.push_back(distance(c.ring[i].pos, c.ring[(i + 1) % c.size()].pos));
  return out;
}

// ---------------------------------------------------------------------------
// Initialization
// ---------------------------------------------------------------------------

/// Add a closed curve following `outline`, sampled at (nearly) equal Riemannian arc
/// length with edges in [delta, zeta * delta]. The curve is oriented with positive area.
inline void add_curve(SnakeModel &m, std::span<const Point> outline) {
  if (outline.size() < 3) throw GeometryError("outline needs at least three points");
  const double w = m.width() - 1;
  const double h = m.height() - 1;
  for (const Point &p : outline)
    if (p.x < 0.0 || p.y < 0.0 || p.x > w || p.y > h) throw GeometryError("initial curve leaves the image");

  std::vector<Point> poly(outline.begin(), outline.end());
  if (signed_area(poly) < 0.0) std::reverse(poly.begin(), poly.end());

  // Dense resampling (<= 0.25 px) with cumulative metric arc length.
  std::vector<Point> fine;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Point a = poly[i];
    const Point b = poly[(i + 1) % poly.size()];
    const int n = std::max(1, static_cast<int>(std::ceil(distance(a, b) / 0.25)));
    for (int k = 0; k < n; ++k) fine.push_back(a + (b - a) * (static_cast<double>(k) / n));
  }
  std::vector<double> cum(fine.size() + 1, 0.0);
  for (std::size_t i = 0; i < fine.size(); ++i)
    cum[i + 1] = cum[i] + edge_length_r(m, fine[i], fine[(i + 1) % fine.size()]);
  const double perimeter = cum.back();

  const double delta = m.params.delta;
  const double zeta = m.params.zeta;
  const int n_max = static_cast<int>(std::floor(perimeter / delta));
  if (n_max < 3) throw GeometryError("initial curve too small for three edges of length >= delta");
  const int n_min = std::max(3, static_cast<int>(std::ceil(perimeter / (zeta * delta))));
  const int n = std::clamp(static_cast<int>(std::lround(perimeter / (delta * std::sqrt(zeta)))), n_min, n_max);

  Curve c;
  std::size_t j = 0;
  for (int k = 0; k < n; ++k) {
    const double target = perimeter * k / n;
    while (j + 1 < cum.size() && cum[j + 1] < target) ++j;
    const double seg = cum[j + 1] - cum[j];
    const double t = seg > 0.0 ? (target - cum[j]) / seg : 0.0;
    const Point a = fine[j];
    const Point b = fine[(j + 1) % fine.size()];
    c.ring.push_back(m.make_vertex(a + (b - a) * t));
  }
  m.curves.push_back(std::move(c));
}

inline std::vector<Point> circle_outline(Point center, double radius, int count = 0) {
  if (count <= 0) count = std::max(16, static_cast<int>(std::ceil(2.0 * std::numbers::pi * radius / 0.5)));
  std::vector<Point> out;
  for (int i = 0; i < count; ++i) {
    const double t = 2.0 * std::numbers::pi * i / count;
    out.push_back({center.x + radius * std::cos(t), center.y + radius * std::sin(t)});
  }
  return out;
}

inline SnakeModel init_circle(Point center, double radius, std::shared_ptr<const MetricField> metric,
                              const ModelParams &params) {
  if (!(radius > 0.0)) throw GeometryError("circle radius must be positive");
  SnakeModel m = make_model(std::move(metric), params);
  add_curve(m, circle_outline(center, radius));
  resample(m);
  if (m.curves.empty()) throw GeometryError("initial circle vanished during resampling");
  return m;
}

inline SnakeModel init_rect(Point lo, Point hi, std::shared_ptr<const MetricField> metric,
                            const ModelParams &params) {
  if (!(hi.x > lo.x && hi.y > lo.y)) throw GeometryError("rectangle corners must satisfy lo < hi");
  SnakeModel m = make_model(std::move(metric), params);
  const std::vector<Point> outline{lo, {hi.x, lo.y}, hi, {lo.x, hi.y}};
  add_curve(m, outline);
  resample(m);
  if (m.curves.empty()) throw GeometryError("initial rectangle vanished during resampling");
  return m;
}

// ---------------------------------------------------------------------------
// Forces and integration
// ---------------------------------------------------------------------------

/// Precomputed image fields sampled by the external forces.
struct ForceField {
  VectorField potential_gradient;  ///< gradient of the attraction potential
  GrayImage intensity;             ///< I as seen by the inflation force
  GrayImage local_mean;            ///< g_tau * I

  /// `potential` is the attraction potential (e.g. the tensor trace s^2); `tau` the scale
  /// of the local-mean filter. `intensity_sigma` > 0 pre-smooths I for the inflation term.
  static ForceField make(const GrayImage &image, const GrayImage &potential, double tau,
                         double intensity_sigma = 0.0) {
    if (!image.same_shape(potential)) throw DimensionError("potential and image shapes differ");
    return {gradient(potential), gaussian_blur(image, intensity_sigma), gaussian_blur(image, tau)};
  }
};

/// Outward unit normal at vertex i (right-hand normal of prev -> next).
inline Vec2 outward_normal(const Curve &c, std::size_t i) {
  const std::size_t n = c.size();
  const Vec2 t = c.ring[(i + 1) % n].pos - c.ring[(i + n - 1) % n].pos;
  const double len = norm(t);
  if (len == 0.0) return {};
  return Vec2{t.y, -t.x} / len;
}

/// Accumulate into every vertex's `force`:
///   alpha (mid(prev, next) - pos) + beta grad P(pos) + chi (I(pos) - (g_tau * I)(pos)) n_out
///   - gamma m vel / dt
inline void compute_forces(SnakeModel &m, const ForceField &field) {
  const ModelParams &p = m.params;
  for (Curve &c : m.curves) {
    const std::size_t n = c.size();
    for (std::size_t i = 0; i < n; ++i) {
      Vertex &v = c.ring[i];
      const Vec2 nrm = outward_normal(c, i);
      Vec2 shape;  // tension + attraction, optionally reduced to the normal component
      if (p.use_tension && p.alpha != 0.0) {
        const Point mid = midpoint(c.ring[(i + n - 1) % n].pos, c.ring[(i + 1) % n].pos);
        shape += p.alpha * (mid - v.pos);
      }
      if (p.use_attraction && p.beta != 0.0) shape += p.beta * field.potential_gradient.sample(v.pos);
      Vec2 f = p.tangential_forces ? shape : dot(shape, nrm) * nrm;
      if (p.use_inflation && p.chi != 0.0) {
        const double contrast = field.intensity.sample(v.pos) - field.local_mean.sample(v.pos);
        f += (p.chi * contrast) * nrm;
      }
      if (p.use_damping) f -= (p.damping * p.mass / p.dt) * v.vel;
      v.force = f;
    }
  }
}

/// Semi-implicit Euler with a per-vertex displacement cap. Updates d_max_last, measured in
/// the same norm as the cap so that the collision threshold stays in metric units.
inline void integrate(SnakeModel &m) {
  const ModelParams &p = m.params;
  const double cap = p.displacement_cap();
  const double w = m.width() - 1;
  const double h = m.height() - 1;
  double dmax = 0.0;
  double dmax_e = 0.0;
  for (Curve &c : m.curves)
    for (Vertex &v : c.ring) {
      v.vel += (p.dt / p.mass) * v.force;
      Vec2 d = p.dt * v.vel;
      const Mat2 g = p.riemannian_cap ? metric_at(*m.metric, v.pos) : Mat2::identity();
      double len = std::sqrt(g.quad(d));
      if (len > cap) {
        const double s = cap / len;
        d *= s;
        v.vel *= s;
      }
      const Point old = v.pos;
      v.pos += d;
      v.pos.x = std::clamp(v.pos.x, 0.0, w);
      v.pos.y = std::clamp(v.pos.y, 0.0, h);
      const Vec2 moved = v.pos - old;
      dmax = std::max(dmax, std::sqrt(g.quad(moved)));
      dmax_e = std::max(dmax_e, norm(moved));
    }
  m.d_max_last = dmax;
  m.d_max_euclidean_last = dmax_e;
}

// ---------------------------------------------------------------------------
// Collision detection and topology surgery
// ---------------------------------------------------------------------------

struct VertexRef {
  int curve;
  int index;
  friend bool operator==(const VertexRef &, const VertexRef &) = default;
  friend auto operator<=>(const VertexRef &, const VertexRef &) = default;
};

struct CollisionPair {
  VertexRef a;
  VertexRef b;
  double distance;  ///< chord Riemannian distance
};

inline double collision_threshold(const SnakeModel &m) {
  return 0.5 * (m.params.zeta * m.params.delta + m.d_max_last);
}

/// Vertices are neighbors when on the same curve within two ring steps.
inline bool ring_neighbors(const SnakeModel &m, const VertexRef &a, const VertexRef &b) {
  if (a.curve != b.curve) return false;
  const int n = static_cast<int>(m.curves[a.curve].size());
  const int d = std::abs(a.index - b.index);
  return std::min(d, n - d) <= 2;
}

namespace detail {

inline void sort_pairs(std::vector<CollisionPair> &pairs) {
  std::sort(pairs.begin(), pairs.end(), [](const CollisionPair &x, const CollisionPair &y) {
    if (x.distance != y.distance) return x.distance < y.distance;
    if (x.a != y.a) return x.a < y.a;
    return x.b < y.b;
  });
}

}  // namespace detail

/// Non-neighbor vertex pairs whose chord Riemannian distance is within the collision
/// threshold. Candidates come from a Euclidean quadtree query of the same radius, which
/// cannot miss a pair because the Riemannian chord is never shorter than the Euclidean one.
inline std::vector<CollisionPair> detect_collisions(const SnakeModel &m) {
  std::vector<Point> pts;
  std::vector<VertexRef> refs;
  for (int ci = 0; ci < static_cast<int>(m.curves.size()); ++ci)
    for (int vi = 0; vi < static_cast<int>(m.curves[ci].size()); ++vi) {
      pts.push_back(m.curves[ci].ring[vi].pos);
      refs.push_back({ci, vi});
    }
  const double r = collision_threshold(m);
  PointQuadtree<std::size_t> tree(pts, [&] {
    std::vector<std::size_t> ids(pts.size());
    std::iota(ids.begin(), ids.end(), std::size_t{0});
    return ids;
  }());
  std::vector<CollisionPair> pairs;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    tree.query_radius(pts[i], r, [&](const Point &q, std::size_t j) {
      if (j <= i) return;
      if (ring_neighbors(m, refs[i], refs[j])) return;
      const double d = riemannian_edge_length_bounded(*m.metric, pts[i], q, r);
      if (d <= r) pairs.push_back({refs[i], refs[j], d});
    });
  }
  detail::sort_pairs(pairs);
  return pairs;
}

/// Reconnect the model at one colliding pair (u, v): both vertices are removed and the
/// edges pred(u) -> succ(v) and pred(v) -> succ(u) are created. On one curve this splits
/// it in two; across two curves it merges them. Rings left with < 3 vertices vanish.
inline void apply_surgery(SnakeModel &m, const CollisionPair &pair) {
  const VertexRef u = pair.a;
  const VertexRef v = pair.b;
  if (u.curve == v.curve) {
    const std::vector<Vertex> ring = m.curves[u.curve].ring;
    const int n = static_cast<int>(ring.size());
    const int i = u.index;
    const int j = v.index;
    std::vector<Vertex> a, b;
    // succ(u) .. pred(v) and succ(v) .. pred(u)
    for (int k = (i + 1) % n; k != j; k = (k + 1) % n) a.push_back(ring[k]);
    for (int k = (j + 1) % n; k != i; k = (k + 1) % n) b.push_back(ring[k]);
    m.curves.erase(m.curves.begin() + u.curve);
    if (a.size() >= 3) m.curves.push_back({std::move(a)});
    if (b.size() >= 3) m.curves.push_back({std::move(b)});
  } else {
    const std::vector<Vertex> &r1 = m.curves[u.curve].ring;
    const std::vector<Vertex> &r2 = m.curves[v.curve].ring;
    const int n1 = static_cast<int>(r1.size());
    const int n2 = static_cast<int>(r2.size());
    std::vector<Vertex> merged;
    merged.reserve(n1 + n2 - 2);
    for (int k = 1; k < n1; ++k) merged.push_back(r1[(u.index + k) % n1]);  // succ(u) .. pred(u)
    for (int k = 1; k < n2; ++k) merged.push_back(r2[(v.index + k) % n2]);  // succ(v) .. pred(v)
    const int hi = std::max(u.curve, v.curve);
    const int lo = std::min(u.curve, v.curve);
    m.curves.erase(m.curves.begin() + hi);
    m.curves.erase(m.curves.begin() + lo);
    if (merged.size() >= 3) m.curves.push_back({std::move(merged)});
  }
}

struct SurgeryStats {
  int events = 0;
  int splits = 0;
  int merges = 0;
};

namespace detail {

struct IdLocation {
  std::uint64_t id;
  VertexRef ref;
};

inline std::vector<IdLocation> locate_ids(const SnakeModel &m) {
  std::vector<IdLocation> out;
  out.reserve(m.vertex_count());
  for (int ci = 0; ci < static_cast<int>(m.curves.size()); ++ci)
    for (int vi = 0; vi < static_cast<int>(m.curves[ci].size()); ++vi) out.push_back({m.curves[ci].ring[vi].id, {ci, vi}});
  std::sort(out.begin(), out.end(), [](const IdLocation &a, const IdLocation &b) { return a.id < b.id; });
  return out;
}

inline std::optional<VertexRef> find_id(const std::vector<IdLocation> &index, std::uint64_t id) {
  const auto it = std::lower_bound(index.begin(), index.end(), id,
                                   [](const IdLocation &a, std::uint64_t v) { return a.id < v; });
  if (it == index.end() || it->id != id) return std::nullopt;
  return it->ref;
}

}  // namespace detail

/// Resolve collisions in rounds. Each round walks the detected pairs closest-first and
/// performs at most one surgery per neighborhood (pairs within the collision threshold of
/// an earlier event in the same round wait for the next round); then collisions are
/// detected again. Ends when no pair remains.
inline SurgeryStats resolve_collisions(SnakeModel &m, std::vector<CollisionPair> pairs) {
  SurgeryStats st;
  const int limit = m.params.max_surgeries_per_step > 0 ? m.params.max_surgeries_per_step
                                                         : std::max<int>(16, static_cast<int>(m.vertex_count()));
  while (!pairs.empty()) {
    const double r = collision_threshold(m);
    struct Event {
      std::uint64_t a, b;
      Point pa, pb;
    };
    std::vector<Event> events;
    for (const CollisionPair &p : pairs) {
      const Vertex &va = m.curves[p.a.curve].ring[p.a.index];
      const Vertex &vb = m.curves[p.b.curve].ring[p.b.index];
      events.push_back({va.id, vb.id, va.pos, vb.pos});
    }
    std::vector<Point> done;
    int performed = 0;
    for (const Event &e : events) {
      const bool near_done = std::any_of(done.begin(), done.end(), [&](const Point &q) {
        return distance(q, e.pa) <= r || distance(q, e.pb) <= r;
      });
      if (near_done) continue;
      const auto index = detail::locate_ids(m);
      const auto ra = detail::find_id(index, e.a);
      const auto rb = detail::find_id(index, e.b);
      if (!ra || !rb || ring_neighbors(m, *ra, *rb)) continue;
      if (st.events >= limit)
        throw TopologyError("topology surgery did not settle after " + std::to_string(st.events) + " events");
      if (ra->curve == rb->curve)
        ++st.splits;
      else
        ++st.merges;
      apply_surgery(m, {*ra, *rb, 0.0});
      ++st.events;
      ++performed;
      done.push_back(e.pa);
      done.push_back(e.pb);
    }
    pairs = detect_collisions(m);
    if (performed == 0 && !pairs.empty())
      throw TopologyError("collision pairs remain but none could be resolved");
  }
  return st;
}

struct StepStats {
  ResampleStats resample;
  SurgeryStats surgery;
};

/// Integrate one step, then resample, then detect and resolve collisions.
inline StepStats step(SnakeModel &m) {
  StepStats st;
  integrate(m);
  st.resample = resample(m);
  st.surgery = resolve_collisions(m, detect_collisions(m));
  if (st.surgery.events > 0) {
    const ResampleStats again = resample(m);
    st.resample.passes += again.passes;
    st.resample.contractions += again.contractions;
    st.resample.splits += again.splits;
    st.resample.removed_curves += again.removed_curves;
    st.resample.fixpoint = again.fixpoint;
    // Resampling may bring vertices together again.
    const SurgeryStats more = resolve_collisions(m, detect_collisions(m));
    st.surgery.events += more.events;
    st.surgery.splits += more.splits;
    st.surgery.merges += more.merges;
  }
  ++m.iteration;
  return st;
}

// ---------------------------------------------------------------------------
// Evolution
// ---------------------------------------------------------------------------

struct ConvergenceReport {
  int iterations = 0;
  bool converged = false;
  double wall_seconds = 0.0;
  std::size_t vertices = 0;
  std::vector<std::size_t> curve_vertices;
  double min_edge = 0.0;  ///< Euclidean, pixels
  double max_edge = 0.0;
  double mean_edge = 0.0;
  double tol = 0.0;
  int patience = 0;
};

inline ConvergenceReport summarize(const SnakeModel &m) {
  ConvergenceReport r;
  r.vertices = m.vertex_count();
  for (const Curve &c : m.curves) r.curve_vertices.push_back(c.size());
  const std::vector<double> e = edge_lengths_e(m);
  if (!e.empty()) {
    r.min_edge = *std::min_element(e.begin(), e.end());
    r.max_edge = *std::max_element(e.begin(), e.end());
    r.mean_edge = std::accumulate(e.begin(), e.end(), 0.0) / e.size();
  }
  r.tol = m.params.tol;
  r.patience = m.params.patience;
  return r;
}

using StepObserver = std::function<void(const SnakeModel &)>;

/// Run force computation and steps until the largest Euclidean displacement stays below
/// `tol` for `patience` consecutive steps, or `max_iters` steps have run.
inline ConvergenceReport evolve(SnakeModel &m, const ForceField &field, int max_iters,
                                const StepObserver &observer = {}) {
  const auto t0 = std::chrono::steady_clock::now();
  int quiet = 0;
  int it = 0;
  bool converged = false;
  while (it < max_iters) {
    compute_forces(m, field);
    step(m);
    ++it;
    if (observer) observer(m);
    quiet = m.d_max_euclidean_last < m.params.tol ? quiet + 1 : 0;
    if (quiet >= m.params.patience || m.curves.empty()) {
      converged = true;
      break;
    }
  }
  ConvergenceReport r = summarize(m);
  r.iterations = it;
  r.converged = converged;
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

inline void write_report_header(std::ostream &os) {
  os << "iterations,converged,wall_seconds,vertices,curves,min_edge,max_edge,mean_edge,tol,patience\n";
}

inline void write_report_row(const ConvergenceReport &r, std::ostream &os) {
  os << r.iterations << ',' << (r.converged ? 1 : 0) << ',' << r.wall_seconds << ',' << r.vertices << ','
     << r.curve_vertices.size() << ',' << r.min_edge << ',' << r.max_edge << ',' << r.mean_edge << ',' << r.tol
     << ',' << r.patience << '\n';
}

}  // namespace rsnake
