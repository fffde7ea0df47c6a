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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include "rsnake.hpp"
#include "support/models.hpp"
#include "support/oracles.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

using namespace rsnake;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char *f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const double kInf = std::numeric_limits<double>::infinity();
const double kLowNoisePsnr = 40.0;

// 1. Tensor curvature along analytic circles.
Outcome curvature_accuracy() {
  CurvatureSweepConfig cfg;
  cfg.sweep.sigmas = {2};
  cfg.sweep.rhos = {10};
  cfg.sweep.psnrs = {kInf, kLowNoisePsnr};
  cfg.sweep.include_naive = false;
  const auto rows = curvature_sweep(disk_cases(cfg), cfg.sweep);
  double worst_clean = 0.0, worst_noisy = 0.0;
  for (const SweepRow &r : rows) {
    const double err = std::abs(r.mean_est - r.true_kappa) / r.true_kappa;
    double &worst = std::isinf(r.psnr_db) ? worst_clean : worst_noisy;
    worst = std::max(worst, err);
  }
  return {rows.size() == 6 && worst_clean <= 0.25 && worst_noisy <= 0.35,
          fmt("worst relative error %.4f noiseless (<= 0.25), %.4f at %g dB (<= 0.35)", worst_clean, worst_noisy,
              kLowNoisePsnr)};
}

// 2. Flat regions far from the contour.
Outcome off_contour_stability() {
  const double sigma = 2.0, rho = 10.0;
  const int size = 200;
  const Point c{0.5 * (size - 1), 0.5 * (size - 1)};
  double tensor_max = 0.0;
  double ratio_min = kInf;
  long flat_pixels = 0;
  for (double r : {15.0, 25.0, 40.0})
    for (double psnr : {kInf, kLowNoisePsnr}) {
      const GrayImage img = add_gaussian_noise(gen_disk(size, c, r, 1.0, 0.0), {psnr, 7});
      const ContourFeatures f = compute_features(img, {sigma, rho, 0.1});
      const GrayImage naive = naive_curvature(img, sigma);
      double t = 0.0, n = 0.0;
      for (int y = 0; y < size; ++y)
        for (int x = 0; x < size; ++x) {
          if (std::abs(distance({double(x), double(y)}, c) - r) < 5.0 * rho) continue;
          t = std::max(t, f.kappa(x, y));
          n = std::max(n, std::abs(naive(x, y)));
          ++flat_pixels;
        }
      tensor_max = std::max(tensor_max, t);
      if (!std::isinf(psnr)) ratio_min = std::min(ratio_min, n / std::max(t, 1e-300));
    }
  return {flat_pixels > 0 && tensor_max < 0.01 / rho && ratio_min >= 10.0,
          fmt("tensor max %.3g (< %.3g), smallest naive/tensor ratio at %g dB %.3g (>= 10)", tensor_max, 0.01 / rho,
              kLowNoisePsnr, ratio_min)};
}

// 3. xi1 + xi2 against a brute-force smoothed squared gradient.
Outcome trace_identity() {
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const GrayImage img = oracle::random_image(64, 64, seed);
    const double sigma = 0.5 + seed * 0.5, rho = 1.0 + 1.5 * seed;
    const TensorEigen e = eigen_decompose(structure_tensor(img, {sigma, rho, 0.1}));
    const auto [gx, gy] = oracle::finite_gradient(oracle::gaussian_blur_2d(img, sigma));
    GrayImage sq(64, 64);
    for (int y = 0; y < 64; ++y)
      for (int x = 0; x < 64; ++x) sq(x, y) = gx(x, y) * gx(x, y) + gy(x, y) * gy(x, y);
    const GrayImage ref = oracle::gaussian_blur_2d(sq, rho);
    for (int y = 0; y < 64; ++y)
      for (int x = 0; x < 64; ++x)
        worst = std::max(worst, std::abs(e.xi1(x, y) + e.xi2(x, y) - ref(x, y)) / std::abs(ref(x, y)));
  }
  return {worst <= 1e-9, fmt("worst relative deviation %.3g (<= 1e-9)", worst)};
}

// 4. Eigenvalue clamps on random feature fields.
Outcome metric_clamps() {
  long violations = 0, pixels = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    ContourFeatures f{oracle::random_image(48, 40, 100 + seed, 0.0, 3.0), oracle::random_image(48, 40, 200 + seed, 0.0, 0.5),
                      GrayImage(48, 40), GrayImage(48, 40)};
    const GrayImage angle = oracle::random_image(48, 40, 300 + seed, 0.0, 6.3);
    for (int y = 0; y < 40; ++y)
      for (int x = 0; x < 48; ++x) {
        f.nx(x, y) = std::cos(angle(x, y));
        f.ny(x, y) = std::sin(angle(x, y));
      }
    MetricParams p;
    p.s_ref = 1.0 + 0.2 * seed;
    p.l_min = 0.5;
    p.l_max = 10.0 + seed;
    const MetricField m = build_metric(f, p);
    const double cap = (m.kappa_max / m.kappa_ref) * (m.kappa_max / m.kappa_ref);
    for (int y = 0; y < 40; ++y)
      for (int x = 0; x < 48; ++x) {
        ++pixels;
        if (!(1.0 <= m.mu2(x, y) && m.mu2(x, y) <= m.mu1(x, y) && m.mu1(x, y) <= cap * (1.0 + 1e-12))) ++violations;
      }
  }
  return {violations == 0, fmt("%ld violations over %ld pixels", violations, pixels)};
}

// 5. Converged edge length against radius.
Outcome edge_length_law() {
  const CircleLengthsConfig cfg;
  const double ratio_cfg = cfg.params.resolved_l_max() / cfg.params.l_min;
  const auto rows = run_circle_lengths(cfg);
  bool monotone = true, in_bounds = true, converged = true;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    converged = converged && rows[i].converged;
    in_bounds = in_bounds && rows[i].mean_edge >= rows[i].l_min && rows[i].mean_edge <= rows[i].zeta_delta;
    if (i) monotone = monotone && rows[i].mean_edge >= rows[i - 1].mean_edge;
  }
  const double span = rows.back().mean_edge / rows.front().mean_edge;
  return {converged && monotone && in_bounds && span >= 5.0 && std::abs(ratio_cfg - 50.0) < 1e-9,
          fmt("l_max/l_min %g, mean edge %.3g..%.3g, span %.2fx (>= 5), monotone %d, in bounds %d, converged %d",
              ratio_cfg, rows.front().mean_edge, rows.back().mean_edge, span, monotone, in_bounds, converged)};
}

// 6. Vertex counts across resolutions.
Outcome resolution_independence() {
  const ResolutionConfig cfg;
  const auto rows = run_resolution(cfg);
  std::vector<double> ada, uni;
  bool converged = true;
  for (const auto &r : rows) {
    (r.mode == "adaptive" ? ada : uni).push_back(static_cast<double>(r.vertices));
    converged = converged && r.converged;
  }
  double spread = 0.0;
  for (double a : ada)
    for (double b : ada) spread = std::max(spread, std::abs(a - b) / std::min(a, b));
  double growth = kInf;
  for (std::size_t i = 1; i < uni.size(); ++i) growth = std::min(growth, uni[i] / uni[i - 1]);
  std::string counts;
  for (std::size_t i = 0; i < ada.size(); ++i)
    counts += fmt("%s%d:%g/%g", i ? " " : "", cfg.sizes[i], ada[i], i < uni.size() ? uni[i] : 0.0);
  return {ada.size() == 3 && uni.size() == 3 && converged && spread <= 0.2 && growth >= 1.8,
          fmt("adaptive/identity vertices %s, adaptive spread %.1f%% (<= 20%%), identity growth %.2fx (>= 1.8)",
              counts.c_str(), 100.0 * spread, growth)};
}

// 7. Adaptive against uniform on the benchmark scene.
Outcome adaptive_vs_uniform() {
  CompareConfig cfg;
  cfg.repeats = 1;
  cfg.coarse_to_fine = false;
  const auto runs = run_compare(cfg);
  const RunRecord &a = runs.at(0);
  const RunRecord &u = runs.at(1);
  const double vr = double(a.vertices) / double(u.vertices);
  const double ir = double(a.iterations) / double(u.iterations);
  const double dh = std::abs(a.hausdorff - u.hausdorff);
  return {a.converged && u.converged && vr <= 0.6 && ir <= 0.8 && dh <= 1.0,
          fmt("vertices %zu/%zu = %.2f (<= 0.6), iterations %d/%d = %.2f (<= 0.8), Hausdorff %.3f vs %.3f (diff <= 1)",
              a.vertices, u.vertices, vr, a.iterations, u.iterations, ir, a.hausdorff, u.hausdorff)};
}

// 8. Curve counts after splits and merges.
Outcome topology() {
  std::string detail;
  bool ok = true;
  for (const TopologyScene &s : {scene_two_disks(), scene_merge(), scene_annulus()}) {
    const TopologyOutcome o = run_topology_scene(s);
    ok = ok && o.ok();
    detail += fmt("%s%s %d/%d curves simple %d oriented %d", detail.empty() ? "" : ", ", o.name.c_str(), o.curves,
                  o.expected_curves, o.simple, o.orientation);
  }
  return {ok, detail};
}

// 9. Quadtree query against all pairs, and its scaling.
Outcome collision_detection() {
  auto metric = [] {
    const GrayImage img = gen_disk(128, {63.5, 63.5}, 30.0, 1.0, 0.0);
    const ContourFeatures f = compute_features(img, {1.0, 4.0, 0.1});
    MetricParams p;
    p.s_ref = 0.9 * max_strength(f);
    p.l_max = 20.0;
    return std::make_shared<const MetricField>(build_metric(f, p));
  }();
  int mismatches = 0;
  std::size_t pairs = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const int n = 20 + static_cast<int>(seed * 4.8);  // 20 .. 495
    const SnakeModel m = support::random_model(metric, n, seed, 4.0 + seed % 5);
    std::set<std::pair<oracle::Ref, oracle::Ref>> got;
    for (const auto &p : detect_collisions(m)) got.insert({{p.a.curve, p.a.index}, {p.b.curve, p.b.index}});
    const auto want = oracle::all_pairs_collisions(m, collision_threshold(m));
    mismatches += got != want;
    pairs += want.size();
  }
  // time per query at constant vertex density
  std::vector<double> times;
  std::string series;
  for (int n : {2000, 4000, 8000, 16000}) {
    const SnakeModel m = support::uniform_density_model(n, 0.02, 11, 4.0);
    std::vector<double> t;
    std::size_t found = 0;
    for (int k = 0; k < 5; ++k) {
      const auto t0 = std::chrono::steady_clock::now();
      found = detect_collisions(m).size();
      t.push_back(seconds_since(t0));
    }
    times.push_back(detail::median(t));
    series += fmt("%s%d:%.2fms", series.empty() ? "" : " ", n, 1e3 * times.back());
    (void)found;
  }
  double worst = 0.0;
  for (std::size_t i = 1; i < times.size(); ++i) worst = std::max(worst, times[i] / times[i - 1]);
  return {mismatches == 0 && worst <= 3.0,
          fmt("%d/100 models differ (%zu pairs total), query time %s, worst doubling ratio %.2f (<= 3)", mismatches,
              pairs, series.c_str(), worst)};
}

// 10. Metric build time against pixel count.
Outcome metric_scaling() {
  const MetricTimingConfig cfg;
  const auto rows = run_metric_timing(cfg);
  const LinearFit fit = fit_metric_timing(rows);
  return {fit.r2 >= 0.95, fmt("R^2 %.4f (>= 0.95) over %zu sizes, %.3g us per pixel", fit.r2, rows.size(), 1e6 * fit.slope)};
}

// 11. Damping, resampling and determinism properties.
Outcome properties() {
  // kinetic energy under damping alone
  ModelParams mp;
  mp.delta = 4.0;
  mp.use_tension = mp.use_attraction = mp.use_inflation = false;
  auto flat = std::make_shared<const MetricField>(MetricField::identity(200, 200));
  SnakeModel m = init_circle({100, 100}, 40, flat, mp);
  std::mt19937_64 rng(5);
  std::normal_distribution<double> nd(0.0, 0.5);
  for (Curve &c : m.curves)
    for (Vertex &v : c.ring) v.vel = {nd(rng), nd(rng)};
  const ForceField none = ForceField::make(GrayImage(200, 200), GrayImage(200, 200), 1.0);
  auto energy = [&] {
    double e = 0.0;
    for (const Curve &c : m.curves)
      for (const Vertex &v : c.ring) e += 0.5 * m.params.mass * dot(v.vel, v.vel);
    return e;
  };
  bool energy_ok = true;
  double e = energy();
  for (int k = 0; k < 50; ++k) {
    compute_forces(m, none);
    integrate(m);
    const double next = energy();
    energy_ok = energy_ok && next <= e;
    e = next;
  }

  // every resample during a full run reaches a fixpoint, and a second call changes nothing
  bool fixpoint_ok = true;
  const BenchScene s = bench_scene(100);
  segment(s.image, s.params, s.seeds, [&](const SnakeModel &cur) {
    SnakeModel copy = cur;
    const auto before = copy.polygons();
    const ResampleStats st = resample(copy);
    fixpoint_ok = fixpoint_ok && st.fixpoint && st.passes == 1 && copy.polygons() == before;
  });

  // seeded artifacts
  auto sweep_csv = [] {
    CurvatureSweepConfig cfg;
    cfg.sweep.sigmas = {2};
    cfg.sweep.rhos = {5};
    cfg.sweep.psnrs = {10};
    cfg.sweep.trials = 3;
    cfg.sweep.seed = 42;
    std::ostringstream os;
    write_sweep_csv(curvature_sweep(disk_cases(cfg), cfg.sweep), os);
    return os.str();
  };
  auto topo_csv = [] {
    std::ostringstream os;
    write_topology_csv({run_topology_scene(scene_merge())}, os);
    return os.str();
  };
  const bool deterministic = sweep_csv() == sweep_csv() && topo_csv() == topo_csv();
  return {energy_ok && fixpoint_ok && deterministic,
          fmt("energy non-increasing %d, resample fixpoint %d, seeded CSV identical %d", energy_ok, fixpoint_ok,
              deterministic)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char *, std::function<Outcome()>>> criteria{
      {"curvature accuracy", curvature_accuracy},
      {"off-contour stability", off_contour_stability},
      {"trace identity", trace_identity},
      {"metric clamp bounds", metric_clamps},
      {"edge-length law", edge_length_law},
      {"resolution independence", resolution_independence},
      {"adaptive vs uniform", adaptive_vs_uniform},
      {"topology surgery", topology},
      {"collision detection", collision_detection},
      {"metric build scaling", metric_scaling},
      {"integrator properties", properties},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception &e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s %2zu %s: %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str(),
                seconds_since(t0));
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed ? 1 : 0;
}
