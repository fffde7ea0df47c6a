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
 * @file segment.hpp
 * @brief End-to-end segmentation: features, metric, forces, initialization, evolution.
 */

#pragma once

#include "rsnake/config.hpp"
#include "rsnake/metric.hpp"
#include "rsnake/snake.hpp"
#include "rsnake/structure_tensor.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

namespace rsnake {

struct SegmentParams {
  // contour features
  double sigma = 2.0;
  double rho = 10.0;
  double epsilon_fraction = 0.1;
  double rho_attract = 2.0;  ///< integration scale of the attraction potential

  // metric
  double s_ref_fraction = 0.9;  ///< s_ref as a fraction of s_max, used when s_ref == 0
  double s_ref = 0.0;
  double l_min = 0.5;
  double l_max = 0.0;  ///< 0 means 50 * l_min
  double zeta = 2.5;
  double kappa_max = 0.0;  ///< > 0 overrides detection
  double kappa_max_strength_fraction = 0.5;
  bool uniform = false;         ///< identity metric instead of the adaptive one
  double uniform_delta = 0.5;   ///< delta of the identity-metric model (pixels)

  // forces and dynamics
  double alpha = 0.05;
  bool tangential_forces = false;
  double beta = 1.0;
  double chi = 2.0;  ///< per unit of image intensity range
  double tau = 10.0;
  double inflation_sigma = 1.0;
  double mass = 1.0;
  double damping = 0.5;
  double dt = 1.0;
  double d_cap = 0.0;
  bool riemannian_cap = true;
  double tol = 0.05;
  int patience = 5;
  int max_iters = 3000;

  // initialization: "circle" or "rect"; zero sizes pick a default from the image
  std::string init = "circle";
  double init_cx = -1.0;
  double init_cy = -1.0;
  double init_radius = 0.0;
  double init_x0 = -1.0;
  double init_y0 = -1.0;
  double init_x1 = -1.0;
  double init_y1 = -1.0;

  double resolved_l_max() const { return l_max > 0.0 ? l_max : 50.0 * l_min; }
};

/// Field binding for config files; names match the struct members.
struct SegmentFields {
  template <typename P, typename V>
  void operator()(P &p, V &&v) const {
    v("sigma", p.sigma);
    v("rho", p.rho);
    v("epsilon_fraction", p.epsilon_fraction);
    v("rho_attract", p.rho_attract);
    v("s_ref_fraction", p.s_ref_fraction);
    v("s_ref", p.s_ref);
    v("l_min", p.l_min);
    v("l_max", p.l_max);
    v("zeta", p.zeta);
    v("kappa_max", p.kappa_max);
    v("kappa_max_strength_fraction", p.kappa_max_strength_fraction);
    v("uniform", p.uniform);
    v("uniform_delta", p.uniform_delta);
    v("alpha", p.alpha);
    v("tangential_forces", p.tangential_forces);
    v("beta", p.beta);
    v("chi", p.chi);
    v("tau", p.tau);
    v("inflation_sigma", p.inflation_sigma);
    v("mass", p.mass);
    v("damping", p.damping);
    v("dt", p.dt);
    v("d_cap", p.d_cap);
    v("riemannian_cap", p.riemannian_cap);
    v("tol", p.tol);
    v("patience", p.patience);
    v("max_iters", p.max_iters);
    v("init", p.init);
    v("init_cx", p.init_cx);
    v("init_cy", p.init_cy);
    v("init_radius", p.init_radius);
    v("init_x0", p.init_x0);
    v("init_y0", p.init_y0);
    v("init_x1", p.init_x1);
    v("init_y1", p.init_y1);
  }
};

/// Wall times and outcome of one segmentation run.
struct RunRecord {
  std::string id;
  double metric_seconds = 0.0;
  double evolve_seconds = 0.0;
  double total_seconds = 0.0;
  int iterations = 0;
  bool converged = false;
  std::size_t vertices = 0;
  std::size_t curves = 0;
  double min_edge = 0.0;
  double max_edge = 0.0;
  double mean_edge = 0.0;
  double hausdorff = std::numeric_limits<double>::quiet_NaN();
};

inline void write_run_header(std::ostream &os) {
  os << "id,metric_seconds,evolve_seconds,total_seconds,iterations,converged,vertices,curves,min_edge,max_edge,"
        "mean_edge,hausdorff\n";
}

inline void write_run_row(const RunRecord &r, std::ostream &os) {
  os << r.id << ',' << r.metric_seconds << ',' << r.evolve_seconds << ',' << r.total_seconds << ',' << r.iterations
     << ',' << (r.converged ? 1 : 0) << ',' << r.vertices << ',' << r.curves << ',' << r.min_edge << ','
     << r.max_edge << ',' << r.mean_edge << ',';
  if (std::isnan(r.hausdorff))
    os << "nan";
  else
    os << r.hausdorff;
  os << '\n';
}

/// Everything derived from the image before the model is initialized.
struct Prepared {
  ContourFeatures features;
  std::shared_ptr<const MetricField> metric;
  ForceField forces;
  double s_max = 0.0;
  double s_ref = 0.0;
  double delta = 0.0;
  double seconds = 0.0;
};

/// Attraction potential: trace of the structure tensor at (sigma, rho_attract), scaled to
/// a maximum of 1.
inline GrayImage attraction_potential(const GrayImage &img, const SegmentParams &p) {
  const TensorField t = structure_tensor(img, {p.sigma, p.rho_attract, p.epsilon_fraction});
  GrayImage out(img.width(), img.height());
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x) out(x, y) = t.jxx(x, y) + t.jyy(x, y);
  const double hi = out.max_value();
  if (hi > 0.0)
    for (double &v : out.data()) v /= hi;
  return out;
}

inline MetricParams metric_params_for(const SegmentParams &p, double s_ref) {
  MetricParams mp;
  mp.s_ref = s_ref;
  mp.l_min = p.l_min;
  mp.l_max = p.resolved_l_max();
  mp.zeta = p.zeta;
  mp.kappa_max_strength_fraction = p.kappa_max_strength_fraction;
  if (p.kappa_max > 0.0) mp.kappa_max_override = p.kappa_max;
  return mp;
}

inline Prepared prepare(const GrayImage &img, const SegmentParams &p) {
  const auto t0 = std::chrono::steady_clock::now();
  Prepared out;
  out.features = compute_features(img, {p.sigma, p.rho, p.epsilon_fraction});
  out.s_max = max_strength(out.features);
  out.s_ref = p.s_ref > 0.0 ? p.s_ref : p.s_ref_fraction * out.s_max;
  if (p.uniform) {
    out.metric = std::make_shared<const MetricField>(MetricField::identity(img.width(), img.height()));
    out.delta = p.uniform_delta;
  } else {
    if (!(out.s_ref > 0.0)) throw DegenerateSignalError("image has no contour strength; cannot build a metric");
    const MetricParams mp = metric_params_for(p, out.s_ref);
    out.metric = std::make_shared<const MetricField>(build_metric(out.features, mp));
    out.delta = mp.delta();
  }
  out.forces = ForceField::make(img, attraction_potential(img, p), p.tau, p.inflation_sigma);
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

inline ModelParams model_params_for(const SegmentParams &p, const Prepared &prep, double intensity_range) {
  ModelParams mp;
  mp.mass = p.mass;
  mp.damping = p.damping;
  mp.dt = p.dt;
  mp.d_cap = p.d_cap;
  mp.riemannian_cap = p.riemannian_cap;
  mp.alpha = p.alpha;
  mp.tangential_forces = p.tangential_forces;
  mp.beta = p.beta;
  mp.chi = intensity_range > 0.0 ? p.chi / intensity_range : 0.0;
  mp.tol = p.tol;
  mp.patience = p.patience;
  mp.zeta = p.zeta;
  mp.delta = prep.delta;
  return mp;
}

/// Default initial outline from the init_* parameters.
inline std::vector<Point> default_outline(const GrayImage &img, const SegmentParams &p) {
  const double w = img.width();
  const double h = img.height();
  if (p.init == "circle") {
    const Point c{p.init_cx >= 0.0 ? p.init_cx : 0.5 * (w - 1), p.init_cy >= 0.0 ? p.init_cy : 0.5 * (h - 1)};
    const double r = p.init_radius > 0.0 ? p.init_radius : 0.45 * std::min(w - 1, h - 1);
    return circle_outline(c, r);
  }
  if (p.init == "rect") {
    const Point lo{p.init_x0 >= 0.0 ? p.init_x0 : 2.0, p.init_y0 >= 0.0 ? p.init_y0 : 2.0};
    const Point hi{p.init_x1 >= 0.0 ? p.init_x1 : w - 3.0, p.init_y1 >= 0.0 ? p.init_y1 : h - 3.0};
    return {lo, {hi.x, lo.y}, hi, {lo.x, hi.y}};
  }
  throw ParameterError("unknown init shape: " + p.init);
}

struct SegmentResult {
  Prepared prepared;
  SnakeModel model;
  ConvergenceReport report;
  RunRecord record;
};

/// Full pipeline from a grayscale image and initial outlines.
inline SegmentResult segment(const GrayImage &img, const SegmentParams &p,
                             const std::vector<std::vector<Point>> &outlines, const StepObserver &observer = {},
                             const std::string &id = "segment") {
  const auto t0 = std::chrono::steady_clock::now();
  SegmentResult r;
  r.prepared = prepare(img, p);
  r.model = make_model(r.prepared.metric, model_params_for(p, r.prepared, signal_amplitude(img)));
  for (const auto &o : outlines) add_curve(r.model, o);
  resample(r.model);
  if (observer) observer(r.model);
  r.report = evolve(r.model, r.prepared.forces, p.max_iters, observer);

  RunRecord &rec = r.record;
  rec.id = id;
  rec.metric_seconds = r.prepared.seconds;
  rec.evolve_seconds = r.report.wall_seconds;
  rec.total_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  rec.iterations = r.report.iterations;
  rec.converged = r.report.converged;
  rec.vertices = r.report.vertices;
  rec.curves = r.report.curve_vertices.size();
  rec.min_edge = r.report.min_edge;
  rec.max_edge = r.report.max_edge;
  rec.mean_edge = r.report.mean_edge;
  return r;
}

inline SegmentResult segment(const GrayImage &img, const SegmentParams &p, const StepObserver &observer = {},
                             const std::string &id = "segment") {
  return segment(img, p, {default_outline(img, p)}, observer, id);
}

/// Identity-metric model run on a dyadic pyramid, coarsest first; each level starts from
/// the upsampled result of the previous one. Filter scales are divided by the level factor.
inline SegmentResult segment_coarse_to_fine(const GrayImage &img, SegmentParams p,
                                            const std::vector<std::vector<Point>> &outlines, int levels = 4) {
  if (levels < 1) throw ParameterError("coarse-to-fine needs at least one level");
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<GrayImage> pyramid{img};
  for (int k = 1; k < levels; ++k) pyramid.push_back(downsample2(pyramid.back()));
  p.uniform = true;

  // pixel (x, y) at level k+1 covers level-k pixels 2x..2x+1
  auto down = [](const Point &q) { return Point{0.5 * (q.x - 0.5), 0.5 * (q.y - 0.5)}; };
  auto up = [](const Point &q) { return Point{2.0 * q.x + 0.5, 2.0 * q.y + 0.5}; };

  std::vector<std::vector<Point>> current = outlines;
  for (int k = 1; k < levels; ++k)
    for (auto &o : current)
      for (Point &q : o) q = down(q);

  int total_iters = 0;
  double metric_seconds = 0.0;
  SegmentResult last;
  for (int k = levels - 1; k >= 0; --k) {
    const GrayImage &level = pyramid[k];
    SegmentParams lp = p;
    const double f = std::ldexp(1.0, k);
    lp.sigma = p.sigma / f;
    lp.rho = p.rho / f;
    lp.rho_attract = p.rho_attract / f;
    lp.tau = p.tau / f;
    lp.inflation_sigma = p.inflation_sigma / f;
    for (auto &o : current)
      for (Point &q : o) {
        q.x = std::clamp(q.x, 0.0, level.width() - 1.0);
        q.y = std::clamp(q.y, 0.0, level.height() - 1.0);
      }
    last = segment(level, lp, current, {}, "coarse_to_fine");
    total_iters += last.report.iterations;
    metric_seconds += last.prepared.seconds;
    current = last.model.polygons();
    if (k > 0)
      for (auto &o : current)
        for (Point &q : o) q = up(q);
  }
  last.record.iterations = total_iters;
  last.record.metric_seconds = metric_seconds;
  last.record.total_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  last.record.evolve_seconds = last.record.total_seconds - metric_seconds;
  return last;
}

}  // namespace rsnake
