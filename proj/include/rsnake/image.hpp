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
 * @file image.hpp
 * @brief Dense grayscale rasters, Gaussian filtering, finite differences,
 *        and synthetic test-image generation.
 */

#pragma once

#include "rsnake/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace rsnake {

/// Row-major raster of real intensities.
class GrayImage {
 public:
  GrayImage() = default;

  GrayImage(int width, int height, double fill = 0.0) : width_(width), height_(height) {
    if (width < 1 || height < 1) {
      throw DimensionError("image dimensions must be positive, got " + std::to_string(width) + "x" +
                           std::to_string(height));
    }
    data_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  double &operator()(int x, int y) { return data_[index(x, y)]; }
  double operator()(int x, int y) const { return data_[index(x, y)]; }

  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }

  /// Value at (x, y) with coordinates clamped to the raster.
  double clamped(int x, int y) const {
    x = std::clamp(x, 0, width_ - 1);
    y = std::clamp(y, 0, height_ - 1);
    return data_[index(x, y)];
  }

  /// Bilinear interpolation; points outside the raster are clamped to the border.
  double sample(double x, double y) const {
    x = std::clamp(x, 0.0, static_cast<double>(width_ - 1));
    y = std::clamp(y, 0.0, static_cast<double>(height_ - 1));
    const int x0 = std::min(static_cast<int>(x), width_ - 1);
    const int y0 = std::min(static_cast<int>(y), height_ - 1);
    const int x1 = std::min(x0 + 1, width_ - 1);
    const int y1 = std::min(y0 + 1, height_ - 1);
    const double fx = x - x0;
    const double fy = y - y0;
    const double top = (1.0 - fx) * data_[index(x0, y0)] + fx * data_[index(x1, y0)];
    const double bottom = (1.0 - fx) * data_[index(x0, y1)] + fx * data_[index(x1, y1)];
    return (1.0 - fy) * top + fy * bottom;
  }
  double sample(const Point &p) const { return sample(p.x, p.y); }

  double min_value() const { return *std::min_element(data_.begin(), data_.end()); }
  double max_value() const { return *std::max_element(data_.begin(), data_.end()); }

  bool same_shape(const GrayImage &o) const noexcept { return width_ == o.width_ && height_ == o.height_; }

  friend bool operator==(const GrayImage &, const GrayImage &) = default;

 private:
  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<double> data_;
};

/// Per-pixel 2-vector field, e.g. an image gradient.
struct VectorField {
  GrayImage gx;
  GrayImage gy;

  int width() const noexcept { return gx.width(); }
  int height() const noexcept { return gx.height(); }
  Vec2 sample(const Point &p) const { return {gx.sample(p), gy.sample(p)}; }
};

namespace detail {

/// Whole-sample-symmetric reflection with edge duplication (… 1 0 | 0 1 2 … n-1 | n-1 n-2 …),
/// valid for any offset.
inline int reflect_index(int i, int n) {
  if (n == 1) return 0;
  const int period = 2 * n;
  i %= period;
  if (i < 0) i += period;
  return i < n ? i : period - 1 - i;
}

}  // namespace detail

/// Normalized 1D Gaussian kernel truncated at 4 standard deviations. The kernel has
/// 2*radius+1 taps; stddev == 0 yields the unit impulse.
inline std::vector<double> gaussian_kernel(double stddev) {
  if (!(stddev >= 0.0) || !std::isfinite(stddev)) throw ParameterError("gaussian stddev must be finite and >= 0");
  const int radius = static_cast<int>(std::ceil(4.0 * stddev));
  if (radius == 0) return {1.0};
  std::vector<double> k(2 * radius + 1);
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    const double v = std::exp(-0.5 * (i * i) / (stddev * stddev));
    k[i + radius] = v;
    sum += v;
  }
  for (double &v : k) v /= sum;
  return k;
}

/// Separable Gaussian blur with mirror padding.
inline GrayImage gaussian_blur(const GrayImage &img, double stddev) {
  const std::vector<double> k = gaussian_kernel(stddev);
  if (k.size() == 1) return img;
  const int r = static_cast<int>(k.size() / 2);
  const int w = img.width();
  const int h = img.height();

  GrayImage tmp(w, h);
  std::vector<double> line;
  for (int y = 0; y < h; ++y) {
    line.assign(w + 2 * r, 0.0);
    for (int i = -r; i < w + r; ++i) line[i + r] = img(detail::reflect_index(i, w), y);
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int j = 0; j <= 2 * r; ++j) acc += k[j] * line[x + j];
      tmp(x, y) = acc;
    }
  }
  GrayImage out(w, h);
  for (int x = 0; x < w; ++x) {
    line.assign(h + 2 * r, 0.0);
    for (int i = -r; i < h + r; ++i) line[i + r] = tmp(x, detail::reflect_index(i, h));
    for (int y = 0; y < h; ++y) {
      double acc = 0.0;
      for (int j = 0; j <= 2 * r; ++j) acc += k[j] * line[y + j];
      out(x, y) = acc;
    }
  }
  return out;
}

/// Finite-difference gradient: central differences inside, one-sided on the border.
inline VectorField gradient(const GrayImage &img) {
  const int w = img.width();
  const int h = img.height();
  if (w < 3 || h < 3) throw DimensionError("gradient needs an image of at least 3x3 pixels");
  VectorField g{GrayImage(w, h), GrayImage(w, h)};
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (x == 0) {
        g.gx(x, y) = img(1, y) - img(0, y);
      } else if (x == w - 1) {
        g.gx(x, y) = img(w - 1, y) - img(w - 2, y);
      } else {
        g.gx(x, y) = 0.5 * (img(x + 1, y) - img(x - 1, y));
      }
      if (y == 0) {
        g.gy(x, y) = img(x, 1) - img(x, 0);
      } else if (y == h - 1) {
        g.gy(x, y) = img(x, h - 1) - img(x, h - 2);
      } else {
        g.gy(x, y) = 0.5 * (img(x, y + 1) - img(x, y - 1));
      }
    }
  }
  return g;
}

/// Second partial derivatives (central differences with mirror padding).
struct Hessian {
  GrayImage ixx;
  GrayImage ixy;
  GrayImage iyy;
};

inline Hessian hessian(const GrayImage &img) {
  const int w = img.width();
  const int h = img.height();
  if (w < 3 || h < 3) throw DimensionError("hessian needs an image of at least 3x3 pixels");
  auto at = [&](int x, int y) { return img(detail::reflect_index(x, w), detail::reflect_index(y, h)); };
  Hessian H{GrayImage(w, h), GrayImage(w, h), GrayImage(w, h)};
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double c = at(x, y);
      H.ixx(x, y) = at(x + 1, y) - 2.0 * c + at(x - 1, y);
      H.iyy(x, y) = at(x, y + 1) - 2.0 * c + at(x, y - 1);
      H.ixy(x, y) = 0.25 * (at(x + 1, y + 1) - at(x + 1, y - 1) - at(x - 1, y + 1) + at(x - 1, y - 1));
    }
  }
  return H;
}

// ---------------------------------------------------------------------------
// Synthetic images
// ---------------------------------------------------------------------------

namespace detail {

// Linear ramp over a band of width `blur` centered on the zero level of `signed_dist`.
inline double shade(double signed_dist, double fg, double bg, double blur) {
  double t;
  if (blur > 0.0) {
    t = std::clamp(0.5 - signed_dist / blur, 0.0, 1.0);
  } else {
    t = signed_dist <= 0.0 ? 1.0 : 0.0;
  }
  return bg + (fg - bg) * t;
}

}  // namespace detail

/// Antialiased disk on a square canvas; the boundary is the circle |p - center| = radius.
inline GrayImage gen_disk(int size, Point center, double radius, double fg, double bg, double edge_blur = 1.0) {
  if (!(radius > 0.0)) throw GeometryError("disk radius must be positive");
  if (radius >= 0.5 * size) throw GeometryError("disk radius must be smaller than half the image size");
  if (edge_blur < 0.0) throw ParameterError("edge_blur must be >= 0");
  GrayImage img(size, size);
  for (int y = 0; y < size; ++y)
    for (int x = 0; x < size; ++x) {
      const double d = std::hypot(x - center.x, y - center.y) - radius;
      img(x, y) = detail::shade(d, fg, bg, edge_blur);
    }
  return img;
}

/// First-order signed distance to the ellipse with semi-axes (a, b) rotated by `angle`.
/// Exact for a == b.
inline double ellipse_signed_distance(Point p, Point center, double a, double b, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  const double dx = p.x - center.x;
  const double dy = p.y - center.y;
  const double u = c * dx + s * dy;
  const double v = -s * dx + c * dy;
  const double q = std::sqrt((u / a) * (u / a) + (v / b) * (v / b));
  if (q == 0.0) return -b;
  const double gx = u / (a * a);
  const double gy = v / (b * b);
  return (q - 1.0) * q / std::hypot(gx, gy);
}

inline GrayImage gen_ellipse(int size, Point center, double a, double b, double angle, double fg, double bg,
                             double edge_blur = 1.0) {
  if (!(b > 0.0) || a < b) throw GeometryError("ellipse semi-axes must satisfy a >= b > 0");
  if (a >= 0.5 * size) throw GeometryError("ellipse semi-major axis must be smaller than half the image size");
  if (edge_blur < 0.0) throw ParameterError("edge_blur must be >= 0");
  GrayImage img(size, size);
  for (int y = 0; y < size; ++y)
    for (int x = 0; x < size; ++x)
      img(x, y) = detail::shade(ellipse_signed_distance({double(x), double(y)}, center, a, b, angle), fg, bg,
                                edge_blur);
  return img;
}

/// Curvature of the ellipse (a cos t, b sin t) at parameter t.
inline double ellipse_curvature(double a, double b, double t) {
  const double st = std::sin(t);
  const double ct = std::cos(t);
  return a * b / std::pow(a * a * st * st + b * b * ct * ct, 1.5);
}

inline Point ellipse_point(Point center, double a, double b, double angle, double t) {
  const double u = a * std::cos(t);
  const double v = b * std::sin(t);
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {center.x + c * u - s * v, center.y + s * u + c * v};
}

// ---------------------------------------------------------------------------
// Noise
// ---------------------------------------------------------------------------

/// Noise level expressed as a peak signal-to-noise ratio, PSNR = 10 log10(I_max / sigma_noise).
/// An infinite psnr_db means "no noise".
struct NoiseSpec {
  double psnr_db = std::numeric_limits<double>::infinity();
  std::uint64_t seed = 0;
};

/// sigma_noise for a signal amplitude and a PSNR label (amplitude ratio under 10 log10).
inline double noise_sigma_for_psnr(double amplitude, double psnr_db) {
  if (std::isinf(psnr_db)) return 0.0;
  return amplitude / std::pow(10.0, psnr_db / 10.0);
}

/// The same noise level under the conventional 20 log10 amplitude definition.
inline double conventional_psnr_label(double psnr_db) { return 2.0 * psnr_db; }

/// Signal amplitude used as I_max: max - min of the input.
inline double signal_amplitude(const GrayImage &img) { return img.max_value() - img.min_value(); }

inline GrayImage add_gaussian_noise(const GrayImage &img, const NoiseSpec &spec) {
  if (std::isinf(spec.psnr_db) && spec.psnr_db > 0) return img;
  if (!(spec.psnr_db > 0.0)) throw ParameterError("psnr_db must be positive");
  const double amplitude = signal_amplitude(img);
  if (!(amplitude > 0.0)) throw DegenerateSignalError("cannot define a noise level on a constant image");
  const double sigma = noise_sigma_for_psnr(amplitude, spec.psnr_db);
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> normal(0.0, sigma);
  GrayImage out = img;
  for (double &v : out.data()) v += normal(rng);
  return out;
}

// ---------------------------------------------------------------------------
// Small raster utilities
// ---------------------------------------------------------------------------

/// Rotation by 90 degrees as an exact pixel permutation: out(x, y) = in(y, h-1-x).
inline GrayImage rotate90(const GrayImage &img) {
  const int w = img.width();
  const int h = img.height();
  GrayImage out(h, w);
  for (int y = 0; y < w; ++y)
    for (int x = 0; x < h; ++x) out(x, y) = img(y, h - 1 - x);
  return out;
}

inline GrayImage transpose(const GrayImage &img) {
  GrayImage out(img.height(), img.width());
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x) out(y, x) = img(x, y);
  return out;
}

/// 2x2 box average; odd trailing rows/columns are dropped. Output pixel (x, y) covers
/// input pixels 2x..2x+1, so its center sits at input coordinate 2x + 0.5.
inline GrayImage downsample2(const GrayImage &img) {
  const int w = img.width() / 2;
  const int h = img.height() / 2;
  if (w < 1 || h < 1) throw DimensionError("image too small to downsample");
  GrayImage out(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      out(x, y) = 0.25 * (img(2 * x, 2 * y) + img(2 * x + 1, 2 * y) + img(2 * x, 2 * y + 1) + img(2 * x + 1, 2 * y + 1));
  return out;
}

/// Apply f to every pixel.
template <typename F>
GrayImage map_pixels(const GrayImage &img, F &&f) {
  GrayImage out = img;
  for (double &v : out.data()) v = f(v);
  return out;
}

/// Debug dump: one image row per CSV line.
inline void write_csv(const GrayImage &img, std::ostream &os) {
  os.precision(17);
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      if (x) os << ',';
      os << img(x, y);
    }
    os << '\n';
  }
}

inline void write_csv(const GrayImage &img, const std::string &path) {
  std::ofstream os(path);
  if (!os) throw Error("cannot open " + path + " for writing");
  write_csv(img, os);
}

}  // namespace rsnake
