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
 * @file experiments.hpp
 * @brief Desk-scale experiment drivers: edge length against radius, resolution
 *        independence, topology scenes, uniform against adaptive, timing.
 */

#pragma once

#include "rsnake/scenes.hpp"
#include "rsnake/segment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <ostream>
#include <string>
#include <vector>

namespace rsnake {

// ---------------------------------------------------------------------------
// Edge length against radius of curvature
// ---------------------------------------------------------------------------

struct CircleLengthsConfig {
  std::vector<double> radii{6, 9, 13, 19, 28, 40, 55};
  int size = 160;
  double init_offset = 4.0;
  SegmentParams params = [] {
    SegmentParams p;
    p.sigma = 1.0;
    p.rho = 4.0;
    p.tau = 10.0;
    return p;
  }();
  bool share_kappa_max = true;  ///< one kappa_max (the largest detected) for every radius
};

struct CircleLengthsRow {
  double radius;
  double true_kappa;
  double mean_edge;
  double min_edge;
  double max_edge;
  double l_min;
  double zeta_delta;
  std::size_t vertices;
  int iterations;
  bool converged;
  double hausdorff;
  GrayImage image;
  std::vector<std::vector<Point>> contours;
};

inline std::vector<CircleLengthsRow> run_circle_lengths(const CircleLengthsConfig &cfg) {
  const Point c{0.5 * (cfg.size - 1), 0.5 * (cfg.size - 1)};
  std::vector<GrayImage> images;
  for (double r : cfg.radii) images.push_back(gen_disk(cfg.size, c, r, 1.0, 0.0, 1.0));

  SegmentParams p = cfg.params;
  if (cfg.share_kappa_max && p.kappa_max <= 0.0) {
    double kmax = 0.0;
    for (const GrayImage &img : images) {
      const ContourFeatures f = compute_features(img, {p.sigma, p.rho, p.epsilon_fraction});
      const double s_ref = p.s_ref > 0.0 ? p.s_ref : p.s_ref_fraction * max_strength(f);
      kmax = std::max(kmax, detect_kappa_max(f, s_ref, p.kappa_max_strength_fraction));
    }
    p.kappa_max = kmax;
  }

  std::vector<CircleLengthsRow> rows;
  for (std::size_t i = 0; i < cfg.radii.size(); ++i) {
    const double r = cfg.radii[i];
    const SegmentResult res = segment(images[i], p, {circle_outline(c, r + cfg.init_offset)});
    const std::vector<std::vector<Point>> truth{circle_outline(c, r, 4096)};
    const auto polys = res.model.polygons();
    const double zd = p.zeta * (p.resolved_l_max() / p.zeta);
    rows.push_back({r, 1.0 / r, res.report.mean_edge, res.report.min_edge, res.report.max_edge, p.l_min, zd,
                    res.report.vertices, res.report.iterations, res.report.converged,
                    polys.empty() ? std::numeric_limits<double>::infinity() : hausdorff_distance(polys, truth),
                    images[i], polys});
  }
  return rows;
}

inline void write_circle_lengths_csv(const std::vector<CircleLengthsRow> &rows, std::ostream &os) {
  os << "radius,true_kappa,mean_edge,min_edge,max_edge,l_min,zeta_delta,vertices,iterations,converged,hausdorff\n";
  for (const auto &r : rows)
    os << r.radius << ',' << r.true_kappa << ',' << r.mean_edge << ',' << r.min_edge << ',' << r.max_edge << ','
       << r.l_min << ',' << r.zeta_delta << ',' << r.vertices << ',' << r.iterations << ',' << (r.converged ? 1 : 0)
       << ',' << r.hausdorff << '\n';
}

// ---------------------------------------------------------------------------
// Resolution independence
// ---------------------------------------------------------------------------

/// One ellipse scene rendered at several resolutions. Lengths are given for the 100-pixel
/// rendering and scaled with the image size; the edge ramp stays one pixel wide.
struct ResolutionConfig {
  std::vector<int> sizes{100, 200, 400};
  double a = 0.32;           ///< semi-major axis, fraction of the size
  double b = 0.16;           ///< semi-minor axis, fraction of the size
  double angle = 0.3;
  double init_radius = 0.14;  ///< fraction of the size
  SegmentParams params = [] {
    SegmentParams p;
    p.sigma = 1.0;
    p.rho = 3.0;
    p.tau = 10.0;
    p.rho_attract = 1.0;
    p.inflation_sigma = 0.5;
    p.l_min = 0.5;
    return p;
  }();
  bool identity_control = true;
};

struct ResolutionRow {
  int size;
  std::string mode;  ///< "adaptive" or "identity"
  std::size_t vertices;
  int iterations;
  bool converged;
  double mean_edge;
  double hausdorff;  ///< in pixels of this rendering
  GrayImage image;
  std::vector<std::vector<Point>> contours;
};

inline SegmentParams scale_lengths(SegmentParams p, double f) {
  p.sigma *= f;
  p.rho *= f;
  p.rho_attract *= f;
  p.tau *= f;
  p.inflation_sigma *= f;
  p.l_min *= f;
  if (p.l_max > 0.0) p.l_max *= f;
  return p;
}

inline std::vector<ResolutionRow> run_resolution(const ResolutionConfig &cfg) {
  std::vector<ResolutionRow> rows;
  for (int size : cfg.sizes) {
    const double f = size / 100.0;
    const Point c{0.5 * (size - 1), 0.5 * (size - 1)};
    const double a = cfg.a * size;
    const double b = cfg.b * size;
    const GrayImage img = gen_ellipse(size, c, a, b, cfg.angle, 1.0, 0.0, 1.0);
    const std::vector<std::vector<Point>> truth{ellipse_outline(c, a, b, cfg.angle, 8192)};
    for (int mode = 0; mode < (cfg.identity_control ? 2 : 1); ++mode) {
      SegmentParams p = scale_lengths(cfg.params, f);
      p.uniform = mode == 1;
      const SegmentResult res = segment(img, p, {circle_outline(c, cfg.init_radius * size)});
      const auto polys = res.model.polygons();
      rows.push_back({size, mode == 0 ? "adaptive" : "identity", res.report.vertices, res.report.iterations,
                      res.report.converged, res.report.mean_edge,
                      polys.empty() ? std::numeric_limits<double>::infinity() : hausdorff_distance(polys, truth),
                      img, polys});
    }
  }
  return rows;
}

inline void write_resolution_csv(const std::vector<ResolutionRow> &rows, std::ostream &os) {
  os << "size,mode,vertices,iterations,converged,mean_edge,hausdorff\n";
  for (const auto &r : rows)
    os << r.size << ',' << r.mode << ',' << r.vertices << ',' << r.iterations << ',' << (r.converged ? 1 : 0) << ','
       << r.mean_edge << ',' << r.hausdorff << '\n';
}

// ---------------------------------------------------------------------------
// Topology scenes
// ---------------------------------------------------------------------------

struct TopologyScene {
  std::string name;
  GrayImage image;
  std::vector<std::vector<Point>> seeds;
  int expected_curves;
  SegmentParams params;
};

struct TopologyOutcome {
  std::string name;
  int expected_curves;
  int curves;
  bool simple;        ///< every curve simple and no two curves cross
  bool orientation;   ///< every curve has the segmented region on its left
  int iterations;
  bool converged;
  std::size_t vertices;
  SnakeModel model;

  bool ok() const { return curves == expected_curves && simple && orientation; }
};

/// Parameters shared by the topology scenes.
inline SegmentParams topology_params() {
  SegmentParams p;
  p.sigma = 1.0;
  p.rho = 4.0;
  p.tau = 12.0;
  p.l_min = 0.5;
  p.l_max = 10.0;
  p.max_iters = 3000;
  return p;
}

/// A single model initialized as one rectangle around two disks; it deflates and splits.
inline TopologyScene scene_two_disks() {
  TopologyScene s;
  s.name = "two_disks";
  s.image = render_sdf(160, 100, sdf_union({sdf_disk({50, 50}, 22), sdf_disk({110, 50}, 22)}), 1.0, 0.0);
  s.seeds = {{{18, 18}, {142, 18}, {142, 82}, {18, 82}}};
  s.expected_curves = 2;
  s.params = topology_params();
  return s;
}

/// Two seeds growing along a bright bar until they meet and merge.
inline TopologyScene scene_merge() {
  TopologyScene s;
  s.name = "merge";
  s.image = render_sdf(200, 80, sdf_capsule({30, 40}, {170, 40}, 11), 1.0, 0.0);
  s.seeds = {circle_outline({48, 40}, 6), circle_outline({152, 40}, 6)};
  s.expected_curves = 1;
  s.params = topology_params();
  return s;
}

/// One seed inside a bright ring grows around it and closes on itself, leaving the outer
/// boundary and the boundary of the hole.
inline TopologyScene scene_annulus() {
  TopologyScene s;
  s.name = "annulus";
  s.image = render_sdf(200, 200, sdf_annulus({100, 100}, 30, 52), 1.0, 0.0);
  s.seeds = {circle_outline({141, 100}, 6)};
  s.expected_curves = 2;
  s.params = topology_params();
  return s;
}

/// Three vessel-like trees with a seed at each root. Trees may touch depending on the
/// generator seed; the expected count comes from connected-component labeling of the
/// thresholded image, not from the construction.
inline TopologyScene scene_vessels(std::uint64_t seed = 1) {
  TopologyScene s;
  s.name = "vessels";
  std::vector<Sdf> parts;
  const double xs[3] = {45, 120, 195};
  for (int k = 0; k < 3; ++k) {
    const VesselTree t = gen_vessel_tree({xs[k], 190}, -0.5 * std::numbers::pi, 40, 6, 3, seed * 10 + k);
    parts.push_back(sdf_vessel_tree(t));
    s.seeds.push_back(circle_outline({xs[k], 178}, 3.5));
  }
  s.image = render_sdf(240, 200, sdf_union(std::move(parts)), 1.0, 0.0);
  s.expected_curves = label_components(s.image, 0.5);
  s.params = topology_params();
  s.params.l_max = 5.0;
  return s;
}

/// True when a point just left of every edge midpoint lies in the bright region.
inline bool interior_on_left(const SnakeModel &m, const GrayImage &image, double threshold) {
  for (const Curve &c : m.curves) {
    int agree = 0;
    const std::size_t n = c.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Point a = c.ring[i].pos;
      const Point b = c.ring[(i + 1) % n].pos;
      const Vec2 t = b - a;
      const double len = norm(t);
      if (len == 0.0) continue;
      const Vec2 left{-t.y / len, t.x / len};
      if (image.sample(midpoint(a, b) + 1.5 * left) > threshold) ++agree;
    }
    if (agree * 10 < static_cast<int>(n) * 9) return false;
  }
  return true;
}

inline TopologyOutcome run_topology_scene(const TopologyScene &scene, const StepObserver &observer = {}) {
  const SegmentResult r = segment(scene.image, scene.params, scene.seeds, observer, scene.name);
  TopologyOutcome o;
  o.name = scene.name;
  o.expected_curves = scene.expected_curves;
  o.curves = static_cast<int>(r.model.curves.size());
  o.iterations = r.report.iterations;
  o.converged = r.report.converged;
  o.vertices = r.report.vertices;
  const auto polys = r.model.polygons();
  o.simple = true;
  for (std::size_t i = 0; i < polys.size(); ++i) {
    if (!is_simple(polys[i])) o.simple = false;
    for (std::size_t j = i + 1; j < polys.size(); ++j)
      if (polygons_cross(polys[i], polys[j])) o.simple = false;
  }
  const double mid = 0.5 * (scene.image.min_value() + scene.image.max_value());
  o.orientation = interior_on_left(r.model, scene.image, mid);
  o.model = r.model;
  return o;
}

inline void write_topology_csv(const std::vector<TopologyOutcome> &rows, std::ostream &os) {
  os << "scene,expected_curves,curves,simple,orientation,iterations,converged,vertices,signed_areas\n";
  for (const auto &r : rows) {
    os << r.name << ',' << r.expected_curves << ',' << r.curves << ',' << (r.simple ? 1 : 0) << ','
       << (r.orientation ? 1 : 0) << ',' << r.iterations << ',' << (r.converged ? 1 : 0) << ',' << r.vertices << ',';
    for (std::size_t i = 0; i < r.model.curves.size(); ++i) os << (i ? ";" : "") << r.model.curves[i].area();
    os << '\n';
  }
}

// ---------------------------------------------------------------------------
// Curvature estimator sweep
// ---------------------------------------------------------------------------

struct CurvatureSweepConfig {
  std::vector<double> radii{15, 25, 40};
  int size = 200;
  int samples_per_circle = 180;
  SweepConfig sweep = [] {
    SweepConfig c;
    c.sigmas = {2, 5, 10};
    c.rhos = {5, 10, 20};
    c.psnrs = {std::numeric_limits<double>::infinity(), 40, 30, 20, 10, 5};
    return c;
  }();
  // radial profile through one noisy disk
  double profile_radius = 25;
  double profile_psnr = 40;
  double profile_sigma = 2;
  double profile_rho = 10;
  int profile_rays = 16;
  double profile_step = 0.5;
};

/// One noiseless disk per radius, all centred on the image.
inline std::vector<SweepCase> disk_cases(const CurvatureSweepConfig &cfg) {
  std::vector<SweepCase> cases;
  const Point c{0.5 * (cfg.size - 1), 0.5 * (cfg.size - 1)};
  for (double r : cfg.radii)
    cases.push_back({gen_disk(cfg.size, c, r, 1.0, 0.0), circle_samples(c, r, cfg.samples_per_circle)});
  return cases;
}

struct RadialProfileRow {
  double distance;    ///< from the disk centre
  double inverse_distance;
  double tensor;      ///< mean over rays
  double naive;       ///< mean |naive| over rays
};

/// Curvature along rays from the centre of a noisy disk out to the image border.
inline std::vector<RadialProfileRow> radial_profile(const CurvatureSweepConfig &cfg) {
  const Point c{0.5 * (cfg.size - 1), 0.5 * (cfg.size - 1)};
  const GrayImage img = add_gaussian_noise(gen_disk(cfg.size, c, cfg.profile_radius, 1.0, 0.0),
                                           {cfg.profile_psnr, cfg.sweep.seed});
  const ContourFeatures f = compute_features(img, {cfg.profile_sigma, cfg.profile_rho, cfg.sweep.epsilon_fraction});
  const GrayImage naive = naive_curvature(img, cfg.profile_sigma);
  std::vector<RadialProfileRow> rows;
  const double reach = 0.5 * (cfg.size - 1) - 1.0;
  for (double d = cfg.profile_step; d <= reach; d += cfg.profile_step) {
    double t = 0.0, n = 0.0;
    for (int k = 0; k < cfg.profile_rays; ++k) {
      const double a = 2.0 * std::numbers::pi * k / cfg.profile_rays;
      const Point p{c.x + d * std::cos(a), c.y + d * std::sin(a)};
      t += f.kappa.sample(p);
      n += std::abs(naive.sample(p));
    }
    rows.push_back({d, 1.0 / d, t / cfg.profile_rays, n / cfg.profile_rays});
  }
  return rows;
}

inline void write_radial_profile_csv(const std::vector<RadialProfileRow> &rows, std::ostream &os) {
  os << "distance,inverse_distance,tensor,naive\n";
  os.precision(10);
  for (const auto &r : rows) os << r.distance << ',' << r.inverse_distance << ',' << r.tensor << ',' << r.naive << '\n';
}

/// psnr_db, sigma_noise and the conventional 20 log10 label for each sweep noise level.
inline void write_noise_levels_csv(const CurvatureSweepConfig &cfg, std::ostream &os) {
  os << "psnr_db,sigma_noise,conventional_psnr_db\n";
  os.precision(10);
  for (double p : cfg.sweep.psnrs) {
    if (std::isinf(p)) {
      os << "inf,0,inf\n";
      continue;
    }
    os << p << ',' << noise_sigma_for_psnr(1.0, p) << ',' << conventional_psnr_label(p) << '\n';
  }
}

// ---------------------------------------------------------------------------
// Uniform against adaptive, and timing
// ---------------------------------------------------------------------------

/// Rounded square with a rectangle initialization outside it; the analytic outline is the
/// reference for Hausdorff errors.
struct BenchScene {
  GrayImage image;
  std::vector<std::vector<Point>> seeds;
  std::vector<std::vector<Point>> truth;
  SegmentParams params;
};

inline BenchScene bench_scene(int size = 200) {
  const double f = size / 200.0;
  const Point c{0.5 * (size - 1), 0.5 * (size - 1)};
  const double h = 55.0 * f;
  const double corner = 5.0 * f;
  const double off = 25.0 * f;
  BenchScene s;
  s.image = render_sdf(size, size, sdf_rounded_square(c, h, corner), 1.0, 0.0);
  s.truth = {rounded_square_outline(c, h, corner, 0.1)};
  s.seeds = {{{c.x - h - off, c.y - h - off}, {c.x + h + off, c.y - h - off}, {c.x + h + off, c.y + h + off},
              {c.x - h - off, c.y + h + off}}};
  s.params.sigma = 1.0;
  s.params.rho = 4.0;
  s.params.tau = 20.0;
  return s;
}

inline double hausdorff_to(const SnakeModel &m, const std::vector<std::vector<Point>> &truth) {
  const auto polys = m.polygons();
  if (polys.empty()) return std::numeric_limits<double>::infinity();
  return hausdorff_distance(polys, truth);
}

struct CompareConfig {
  int size = 200;
  int repeats = 5;  ///< wall times are medians over this many runs
  bool coarse_to_fine = true;
  int levels = 4;
};

namespace detail {

inline double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace detail

/// Records for "adaptive", "uniform" and optionally "coarse_to_fine" on the bench scene.
/// Everything except the times is deterministic, so it is taken from the first run.
inline std::vector<RunRecord> run_compare(const CompareConfig &cfg) {
  const BenchScene scene = bench_scene(cfg.size);
  std::vector<RunRecord> out;
  auto run = [&](const std::string &id, auto &&fn) {
    std::vector<double> metric, evolve, total;
    RunRecord first;
    for (int k = 0; k < std::max(1, cfg.repeats); ++k) {
      SegmentResult r = fn();
      if (k == 0) {
        first = r.record;
        first.hausdorff = hausdorff_to(r.model, scene.truth);
      }
      metric.push_back(r.record.metric_seconds);
      evolve.push_back(r.record.evolve_seconds);
      total.push_back(r.record.total_seconds);
    }
    first.id = id;
    first.metric_seconds = detail::median(metric);
    first.evolve_seconds = detail::median(evolve);
    first.total_seconds = detail::median(total);
    out.push_back(first);
  };
  SegmentParams adaptive = scene.params;
  SegmentParams uniform = scene.params;
  uniform.uniform = true;
  run("adaptive", [&] { return segment(scene.image, adaptive, scene.seeds); });
  run("uniform", [&] { return segment(scene.image, uniform, scene.seeds); });
  if (cfg.coarse_to_fine)
    run("coarse_to_fine", [&] { return segment_coarse_to_fine(scene.image, scene.params, scene.seeds, cfg.levels); });
  return out;
}

struct MetricTimingConfig {
  std::vector<int> sizes{100, 150, 200, 250, 300, 350, 400};
  int repeats = 5;
  SegmentParams params;
};

struct MetricTimingRow {
  int size;
  double pixels;
  double median_seconds;
};

/// Median wall time of features plus metric on a disk scene at every size.
inline std::vector<MetricTimingRow> run_metric_timing(const MetricTimingConfig &cfg) {
  std::vector<MetricTimingRow> rows;
  for (int size : cfg.sizes) {
    const GrayImage img = gen_disk(size, {0.5 * (size - 1), 0.5 * (size - 1)}, 0.3 * size, 1.0, 0.0);
    std::vector<double> times;
    for (int k = 0; k < std::max(1, cfg.repeats); ++k) {
      const auto t0 = std::chrono::steady_clock::now();
      const ContourFeatures f = compute_features(img, {cfg.params.sigma, cfg.params.rho, cfg.params.epsilon_fraction});
      const MetricField m = build_metric(f, metric_params_for(cfg.params, cfg.params.s_ref_fraction * max_strength(f)));
      times.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
      if (m.width() != size) throw Error("metric size mismatch");
    }
    rows.push_back({size, static_cast<double>(size) * size, detail::median(times)});
  }
  return rows;
}

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

/// Ordinary least squares y = slope x + intercept.
inline LinearFit fit_line(const std::vector<double> &x, const std::vector<double> &y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) throw ParameterError("fit_line needs two or more (x, y) pairs");
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LinearFit f;
  if (sxx == 0.0) throw ParameterError("fit_line needs distinct x values");
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return f;
}

inline LinearFit fit_metric_timing(const std::vector<MetricTimingRow> &rows) {
  std::vector<double> x, y;
  for (const auto &r : rows) {
    x.push_back(r.pixels);
    y.push_back(r.median_seconds);
  }
  return fit_line(x, y);
}

inline void write_metric_timing_csv(const std::vector<MetricTimingRow> &rows, std::ostream &os) {
  os << "size,pixels,median_seconds\n";
  for (const auto &r : rows) os << r.size << ',' << r.pixels << ',' << r.median_seconds << '\n';
}

}  // namespace rsnake
