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
 * @file structure_tensor.hpp
 * @brief Gradient structure tensor and the contour strength / curvature
 *        estimators derived from its eigenvalues.
 *
 * With J = g_rho * (grad(I * g_sigma) grad(I * g_sigma)^T) and eigenvalues
 * xi1 >= xi2, a contour of strength s and curvature kappa gives, to second
 * order, xi1 ~ s^2 and xi2 ~ s^2 kappa^2 rho^2. Hence
 *
 *     s     = sqrt(xi1 + xi2)
 *     kappa = sqrt(xi2 / (xi1 + eps)) / rho
 *
 * where eps keeps kappa bounded (and close to zero) in featureless areas.
 */

#pragma once

#include "rsnake/image.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>
#include <string>
#include <vector>

namespace rsnake {

struct EstimatorParams {
  double sigma = 2.0;             ///< pre-smoothing scale (pixels)
  double rho = 10.0;              ///< integration scale (pixels)
  double epsilon_fraction = 0.1;  ///< eps as a fraction of max(xi1)

  void validate() const {
    if (!(sigma >= 0.0)) throw ParameterError("sigma must be >= 0");
    if (!(rho > 0.0)) throw ParameterError("rho must be > 0");
    if (!(epsilon_fraction > 0.0 && epsilon_fraction <= 1.0))
      throw ParameterError("epsilon_fraction must be in (0, 1]");
  }
};

/// Per-pixel symmetric tensor (jxx, jxy, jyy).
struct TensorField {
  GrayImage jxx;
  GrayImage jxy;
  GrayImage jyy;

  int width() const noexcept { return jxx.width(); }
  int height() const noexcept { return jxx.height(); }
  Mat2 at(int x, int y) const { return {jxx(x, y), jxy(x, y), jyy(x, y)}; }
};

/// Eigenvalues xi1 >= xi2 >= 0 and the unit eigenvector w1 of xi1.
struct TensorEigen {
  GrayImage xi1;
  GrayImage xi2;
  GrayImage w1x;
  GrayImage w1y;

  int width() const noexcept { return xi1.width(); }
  int height() const noexcept { return xi1.height(); }
};

/// Contour strength, unsigned curvature and normal direction (modulo pi).
struct ContourFeatures {
  GrayImage s;
  GrayImage kappa;
  GrayImage nx;
  GrayImage ny;
  double rho = 0.0;
  double epsilon = 0.0;  ///< absolute eps used in the curvature estimator
  double xi1_max = 0.0;

  int width() const noexcept { return s.width(); }
  int height() const noexcept { return s.height(); }
};

inline TensorField structure_tensor(const GrayImage &img, const EstimatorParams &p) {
  p.validate();
  const VectorField g = gradient(gaussian_blur(img, p.sigma));
  const int w = img.width();
  const int h = img.height();
  TensorField t{GrayImage(w, h), GrayImage(w, h), GrayImage(w, h)};
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const double gx = g.gx(x, y);
      const double gy = g.gy(x, y);
      t.jxx(x, y) = gx * gx;
      t.jxy(x, y) = gx * gy;
      t.jyy(x, y) = gy * gy;
    }
  t.jxx = gaussian_blur(t.jxx, p.rho);
  t.jxy = gaussian_blur(t.jxy, p.rho);
  t.jyy = gaussian_blur(t.jyy, p.rho);
  return t;
}

struct Eigen2 {
  double l1;  ///< larger eigenvalue
  double l2;
  Vec2 v1;    ///< unit eigenvector of l1, canonical sign
};

/// Closed-form eigen-decomposition of a symmetric 2x2 matrix. v1 is normalized to a
/// nonnegative x component (nonnegative y when x vanishes); isotropic matrices get v1 = (1, 0).
inline Eigen2 eigen_sym2(const Mat2 &m) {
  const double half_trace = 0.5 * (m.xx + m.yy);
  const double half_diff = 0.5 * (m.xx - m.yy);
  const double disc = std::hypot(half_diff, m.xy);
  Eigen2 e{half_trace + disc, half_trace - disc, {1.0, 0.0}};
  const double scale = std::abs(m.xx) + std::abs(m.yy) + std::abs(m.xy);
  if (disc <= 1e-14 * scale || disc == 0.0) return e;
  // Pick the better-conditioned of the two equivalent eigenvector formulas.
  Vec2 v = half_diff >= 0.0 ? Vec2{half_diff + disc, m.xy} : Vec2{m.xy, disc - half_diff};
  v = v / norm(v);
  if (v.x < 0.0 || (v.x == 0.0 && v.y < 0.0)) v = -v;
  e.v1 = v;
  return e;
}

inline TensorEigen eigen_decompose(const TensorField &t) {
  const int w = t.width();
  const int h = t.height();
  TensorEigen e{GrayImage(w, h), GrayImage(w, h), GrayImage(w, h), GrayImage(w, h)};
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const Eigen2 d = eigen_sym2(t.at(x, y));
      e.xi1(x, y) = std::max(d.l1, 0.0);
      e.xi2(x, y) = std::max(d.l2, 0.0);
      e.w1x(x, y) = d.v1.x;
      e.w1y(x, y) = d.v1.y;
    }
  return e;
}

inline ContourFeatures contour_features(const TensorEigen &e, const EstimatorParams &p) {
  p.validate();
  const int w = e.width();
  const int h = e.height();
  ContourFeatures f{GrayImage(w, h), GrayImage(w, h), e.w1x, e.w1y, p.rho, 0.0, e.xi1.max_value()};
  if (!(f.xi1_max > 0.0)) {
    f.nx = GrayImage(w, h, 1.0);
    f.ny = GrayImage(w, h, 0.0);
    return f;
  }
  f.epsilon = p.epsilon_fraction * f.xi1_max;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const double xi1 = e.xi1(x, y);
      const double xi2 = e.xi2(x, y);
      f.s(x, y) = std::sqrt(xi1 + xi2);
      f.kappa(x, y) = std::sqrt(xi2 / (xi1 + f.epsilon)) / p.rho;
    }
  return f;
}

/// Full estimator pipeline: tensor, eigen-decomposition, features.
inline ContourFeatures compute_features(const GrayImage &img, const EstimatorParams &p) {
  return contour_features(eigen_decompose(structure_tensor(img, p)), p);
}

/// Signed isophote curvature div(grad I / |grad I|) from second derivatives of I * g_sigma.
/// Pixels whose gradient magnitude falls below a tiny guard are set to 0.
inline GrayImage naive_curvature(const GrayImage &img, double sigma) {
  if (!(sigma >= 0.0)) throw ParameterError("sigma must be >= 0");
  const GrayImage smooth = gaussian_blur(img, sigma);
  const VectorField g = gradient(smooth);
  const Hessian H = hessian(smooth);
  const double guard = 1e-12 * std::max(1.0, std::abs(smooth.max_value()) + std::abs(smooth.min_value()));
  GrayImage k(img.width(), img.height());
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x) {
      const double ix = g.gx(x, y);
      const double iy = g.gy(x, y);
      const double n2 = ix * ix + iy * iy;
      if (std::sqrt(n2) < guard) continue;
      const double num = H.ixx(x, y) * iy * iy - 2.0 * H.ixy(x, y) * ix * iy + H.iyy(x, y) * ix * ix;
      k(x, y) = num / (n2 * std::sqrt(n2));
    }
  return k;
}

// ---------------------------------------------------------------------------
// Accuracy sweep
// ---------------------------------------------------------------------------

struct BoundarySample {
  Point p;
  double true_kappa;
};

/// One noiseless test image with points on its analytic contour.
struct SweepCase {
  GrayImage clean;
  std::vector<BoundarySample> samples;
};

struct SweepConfig {
  std::vector<double> sigmas{2.0};
  std::vector<double> rhos{10.0};
  std::vector<double> psnrs{std::numeric_limits<double>::infinity()};
  int trials = 40;
  std::uint64_t seed = 1;
  double epsilon_fraction = 0.1;
  bool include_naive = true;
};

struct SweepRow {
  double sigma;
  double rho;
  double psnr_db;
  std::string estimator;  ///< "tensor" or "naive"
  double true_kappa;
  double mean_est;
  double std_est;
  int n_trials;
};

namespace detail {

inline double sample_std(const std::vector<double> &v, double mean) {
  if (v.size() < 2) return 0.0;
  double acc = 0.0;
  for (double x : v) acc += (x - mean) * (x - mean);
  return std::sqrt(acc / static_cast<double>(v.size() - 1));
}

inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a + 0x9E3779B97F4A7C15ull * (b + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace detail

/// Estimate curvature along analytic contours over noise realizations.
///
/// For every (case, sigma, rho, psnr, estimator) and every distinct true curvature, the
/// per-trial estimate is the mean of the feature field (bilinear) over the boundary samples
/// sharing that curvature; rows report the mean and sample standard deviation of those
/// per-trial estimates. Noiseless configurations run a single trial.
inline std::vector<SweepRow> curvature_sweep(const std::vector<SweepCase> &cases, const SweepConfig &cfg) {
  if (cfg.trials < 1) throw ParameterError("curvature_sweep needs at least one trial");
  std::vector<SweepRow> rows;
  for (std::size_t ci = 0; ci < cases.size(); ++ci) {
    const SweepCase &c = cases[ci];
    std::map<double, std::vector<Point>> groups;
    for (const BoundarySample &b : c.samples) groups[b.true_kappa].push_back(b.p);

    for (double sigma : cfg.sigmas)
      for (double rho : cfg.rhos)
        for (std::size_t pi = 0; pi < cfg.psnrs.size(); ++pi) {
          const double psnr = cfg.psnrs[pi];
          const int trials = std::isinf(psnr) ? 1 : cfg.trials;
          std::map<double, std::vector<double>> tensor_est, naive_est;
          for (int t = 0; t < trials; ++t) {
            const std::uint64_t seed = detail::mix_seed(cfg.seed, (ci * 1000003ull + pi) * 1000003ull + t);
            const GrayImage noisy = add_gaussian_noise(c.clean, {psnr, seed});
            const ContourFeatures f = compute_features(noisy, {sigma, rho, cfg.epsilon_fraction});
            GrayImage naive;
            if (cfg.include_naive) naive = naive_curvature(noisy, sigma);
            for (const auto &[kappa, pts] : groups) {
              double acc = 0.0, acc_naive = 0.0;
              for (const Point &p : pts) {
                acc += f.kappa.sample(p);
                if (cfg.include_naive) acc_naive += std::abs(naive.sample(p));
              }
              tensor_est[kappa].push_back(acc / pts.size());
              if (cfg.include_naive) naive_est[kappa].push_back(acc_naive / pts.size());
            }
          }
          auto emit = [&](const char *name, const std::map<double, std::vector<double>> &est) {
            for (const auto &[kappa, v] : est) {
              double mean = 0.0;
              for (double x : v) mean += x;
              mean /= v.size();
              rows.push_back({sigma, rho, psnr, name, kappa, mean, detail::sample_std(v, mean),
                              static_cast<int>(v.size())});
            }
          };
          emit("tensor", tensor_est);
          if (cfg.include_naive) emit("naive", naive_est);
        }
  }
  return rows;
}

inline void write_sweep_csv(const std::vector<SweepRow> &rows, std::ostream &os) {
  os << "sigma,rho,psnr_db,estimator,true_kappa,mean_est,std_est,n_trials\n";
  os.precision(10);
  for (const SweepRow &r : rows) {
    os << r.sigma << ',' << r.rho << ',';
    if (std::isinf(r.psnr_db))
      os << "inf";
    else
      os << r.psnr_db;
    os << ',' << r.estimator << ',' << r.true_kappa << ',' << r.mean_est << ',' << r.std_est << ','
       << r.n_trials << '\n';
  }
}

/// Boundary samples on the circle of radius r at `count` evenly spaced angles.
inline std::vector<BoundarySample> circle_samples(Point center, double r, int count) {
  std::vector<BoundarySample> out;
  for (int i = 0; i < count; ++i) {
    const double t = 2.0 * std::numbers::pi * i / count;
    out.push_back({{center.x + r * std::cos(t), center.y + r * std::sin(t)}, 1.0 / r});
  }
  return out;
}

/// Boundary samples on an ellipse at `count` evenly spaced parameters t in [0, pi/2]
/// mirrored into all four quadrants (so equal curvatures pool together).
inline std::vector<BoundarySample> ellipse_samples(Point center, double a, double b, double angle, int count) {
  std::vector<BoundarySample> out;
  for (int i = 0; i < count; ++i) {
    const double t0 = 0.5 * std::numbers::pi * i / std::max(1, count - 1);
    const double k = ellipse_curvature(a, b, t0);
    for (double t : {t0, std::numbers::pi - t0, std::numbers::pi + t0, 2.0 * std::numbers::pi - t0})
      out.push_back({ellipse_point(center, a, b, angle, t), k});
  }
  return out;
}

}  // namespace rsnake
