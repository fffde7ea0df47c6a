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
 * @file metric.hpp
 * @brief Image-driven Riemannian metric and Riemannian lengths.
 *
 * At every pixel the metric has eigenvectors v1 = n (contour normal) and
 * v2 = n^perp with eigenvalues
 *
 *     mu1 = clamp((s/s_ref)^2 (kmax/kref)^2, 1, (kmax/kref)^2)
 *     mu2 = clamp((kappa/kmax)^2 mu1, 1, mu1)
 *
 * so that an edge running along a reliable contour of curvature kappa has a
 * Euclidean length proportional to 1/kappa, between l_min and delta. The
 * reference curvature follows from kref * delta = kmax * l_min.
 */

#pragma once

#include "rsnake/image.hpp"
#include "rsnake/structure_tensor.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace rsnake {

struct MetricParams {
  double s_ref = 1.0;   ///< contour strength considered reliable
  double l_min = 0.5;   ///< shortest edge (pixels)
  double l_max = 25.0;  ///< longest edge (pixels)
  double zeta = 2.5;    ///< allowed ratio between longest and shortest edge, > 2

  /// kappa_max is taken over pixels with s >= this fraction of s_ref.
  double kappa_max_strength_fraction = 0.5;
  /// Fixes kappa_max instead of detecting it (e.g. to share one reference across images).
  std::optional<double> kappa_max_override;

  double delta() const { return l_max / zeta; }
  double kappa_ref(double kappa_max) const { return kappa_max * l_min / delta(); }
  /// Upper bound on both eigenvalues, (kappa_max / kappa_ref)^2 = (delta / l_min)^2.
  double eigen_cap() const { return (delta() / l_min) * (delta() / l_min); }

  void validate() const {
    if (!(s_ref > 0.0)) throw ParameterError("s_ref must be > 0");
    if (!(l_min > 0.0)) throw ParameterError("l_min must be > 0");
    if (!(l_max > l_min)) throw ParameterError("l_max must exceed l_min");
    if (!(zeta > 2.0)) throw ParameterError("zeta must be greater than 2");
    if (l_min > delta()) throw ParameterError("l_min must not exceed delta = l_max / zeta");
    if (kappa_max_override && !(*kappa_max_override >= 0.0)) throw ParameterError("kappa_max must be >= 0");
  }
};

/// Per-pixel symmetric positive-definite metric with cached eigenstructure.
struct MetricField {
  GrayImage gxx;
  GrayImage gxy;
  GrayImage gyy;
  GrayImage mu1;
  GrayImage mu2;
  GrayImage v1x;
  GrayImage v1y;
  double kappa_max = 0.0;
  double kappa_ref = 0.0;
  double cap = 1.0;
  bool is_identity = false;

  int width() const noexcept { return gxx.width(); }
  int height() const noexcept { return gxx.height(); }

  Mat2 stored(int x, int y) const { return {gxx(x, y), gxy(x, y), gyy(x, y)}; }

  static MetricField identity(int w, int h) {
    MetricField m{GrayImage(w, h, 1.0), GrayImage(w, h, 0.0), GrayImage(w, h, 1.0), GrayImage(w, h, 1.0),
                  GrayImage(w, h, 1.0), GrayImage(w, h, 1.0), GrayImage(w, h, 0.0)};
    m.is_identity = true;
    return m;
  }
};

inline double max_strength(const ContourFeatures &f) { return f.s.max_value(); }

/// Largest curvature over pixels whose strength reaches fraction * s_ref.
inline double detect_kappa_max(const ContourFeatures &f, double s_ref, double fraction) {
  double kmax = 0.0;
  const double threshold = fraction * s_ref;
  for (int y = 0; y < f.height(); ++y)
    for (int x = 0; x < f.width(); ++x)
      if (f.s(x, y) >= threshold) kmax = std::max(kmax, f.kappa(x, y));
  return kmax;
}

/// Eigenvalues of the metric for one pixel's features.
struct MetricEigenvalues {
  double mu1;
  double mu2;
};

inline MetricEigenvalues metric_eigenvalues(double s, double kappa, double s_ref, double kappa_max, double cap) {
  const double mu1 = std::clamp((s * s) / (s_ref * s_ref) * cap, 1.0, cap);
  const double ratio = kappa / kappa_max;
  const double mu2 = std::clamp(ratio * ratio * mu1, 1.0, mu1);
  return {mu1, mu2};
}

inline MetricField build_metric(const ContourFeatures &f, const MetricParams &p) {
  p.validate();
  const int w = f.width();
  const int h = f.height();
  const double kmax =
      p.kappa_max_override ? *p.kappa_max_override : detect_kappa_max(f, p.s_ref, p.kappa_max_strength_fraction);
  if (!(kmax > 0.0)) {
    MetricField m = MetricField::identity(w, h);
    m.is_identity = false;  // built from features, merely degenerate
    return m;
  }
  MetricField m{GrayImage(w, h), GrayImage(w, h), GrayImage(w, h), GrayImage(w, h),
                GrayImage(w, h), GrayImage(w, h), GrayImage(w, h)};
  m.kappa_max = kmax;
  m.kappa_ref = p.kappa_ref(kmax);
  m.cap = p.eigen_cap();
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const auto [mu1, mu2] = metric_eigenvalues(f.s(x, y), f.kappa(x, y), p.s_ref, kmax, m.cap);
      const double nx = f.nx(x, y);
      const double ny = f.ny(x, y);
      // G = mu1 n n^T + mu2 n_perp n_perp^T
      m.gxx(x, y) = mu1 * nx * nx + mu2 * ny * ny;
      m.gxy(x, y) = (mu1 - mu2) * nx * ny;
      m.gyy(x, y) = mu1 * ny * ny + mu2 * nx * nx;
      m.mu1(x, y) = mu1;
      m.mu2(x, y) = mu2;
      m.v1x(x, y) = nx;
      m.v1y(x, y) = ny;
    }
  return m;
}

/// Metric at a continuous point: bilinear interpolation of the coefficients, with the
/// smallest eigenvalue clamped to 1.
inline Mat2 metric_at(const MetricField &field, const Point &pt) {
  if (field.is_identity) return Mat2::identity();
  Mat2 g{field.gxx.sample(pt), field.gxy.sample(pt), field.gyy.sample(pt)};
  const double half_trace = 0.5 * (g.xx + g.yy);
  const double disc = std::hypot(0.5 * (g.xx - g.yy), g.xy);
  if (half_trace - disc < 1.0) {
    const double shift = 1.0 - (half_trace - disc);
    g.xx += shift;
    g.yy += shift;
  }
  return g;
}

/// Riemannian length of the straight segment [u, v]: composite midpoint rule with
/// step min(1, max(0.25, |uv| / 64)) pixels.
inline double riemannian_edge_length(const MetricField &field, const Point &u, const Point &v) {
  const Vec2 d = v - u;
  const double len = norm(d);
  if (len == 0.0) return 0.0;
  if (field.is_identity) return len;
  const double step = std::min(1.0, std::max(0.25, len / 64.0));
  const int n = std::max(1, static_cast<int>(std::ceil(len / step)));
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    const double t = (i + 0.5) / n;
    acc += std::sqrt(metric_at(field, u + d * t).quad(d));
  }
  return acc / n;
}

/// Same quadrature as riemannian_edge_length, abandoned as soon as the partial sum exceeds
/// `limit`; the return value is then some number > limit.
inline double riemannian_edge_length_bounded(const MetricField &field, const Point &u, const Point &v,
                                             double limit) {
  const Vec2 d = v - u;
  const double len = norm(d);
  if (len == 0.0 || field.is_identity || len > limit) return len;
  const double step = std::min(1.0, std::max(0.25, len / 64.0));
  const int n = std::max(1, static_cast<int>(std::ceil(len / step)));
  const double budget = limit * n;
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    const double t = (i + 0.5) / n;
    acc += std::sqrt(metric_at(field, u + d * t).quad(d));
    if (acc > budget) return acc / n + (n - 1 - i) * len / n;
  }
  return acc / n;
}

/// Straight-chord approximation of the Riemannian distance. Never below the Euclidean
/// distance since every metric eigenvalue is >= 1.
inline double riemannian_vertex_distance(const MetricField &field, const Point &u, const Point &v) {
  return riemannian_edge_length(field, u, v);
}

/// Orientation of v1 in radians, in [0, pi).
inline GrayImage metric_orientation(const MetricField &m) {
  GrayImage out(m.width(), m.height());
  for (int y = 0; y < m.height(); ++y)
    for (int x = 0; x < m.width(); ++x) {
      double a = std::atan2(m.v1y(x, y), m.v1x(x, y));
      if (a < 0) a += std::numbers::pi;
      if (a >= std::numbers::pi) a -= std::numbers::pi;
      out(x, y) = a;
    }
  return out;
}

}  // namespace rsnake
