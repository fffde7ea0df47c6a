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

#include "rsnake/image.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace rsnake {

struct SvgLayer {
  std::vector<std::vector<Point>> curves;
  std::string stroke = "#d62728";
  double stroke_width = 0.5;
  double opacity = 1.0;
  bool show_vertices = false;
};

/// SVG document in pixel coordinates, optionally over the image drawn as gray rectangles
/// (one run-length merged rect per row segment of equal 8-bit value).
class SvgWriter {
 public:
  SvgWriter(int width, int height) : width_(width), height_(height) {}

  void set_underlay(const GrayImage &img) { underlay_ = img; }
  void add_layer(SvgLayer layer) { layers_.push_back(std::move(layer)); }

  void write(std::ostream &os) const {
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width_ << "\" height=\"" << height_
       << "\" viewBox=\"-0.5 -0.5 " << width_ << ' ' << height_ << "\">\n";
    if (underlay_.width() > 0) write_underlay(os);
    for (const SvgLayer &l : layers_) {
      os << "<g fill=\"none\" stroke=\"" << l.stroke << "\" stroke-width=\"" << l.stroke_width
         << "\" stroke-opacity=\"" << l.opacity << "\">\n";
      for (const auto &c : l.curves) {
        os << "<polygon points=\"";
        for (std::size_t i = 0; i < c.size(); ++i) os << (i ? " " : "") << fmt(c[i].x) << ',' << fmt(c[i].y);
        os << "\"/>\n";
      }
      os << "</g>\n";
      if (l.show_vertices) {
        os << "<g fill=\"" << l.stroke << "\">\n";
        for (const auto &c : l.curves)
          for (const Point &p : c)
            os << "<circle cx=\"" << fmt(p.x) << "\" cy=\"" << fmt(p.y) << "\" r=\"" << fmt(l.stroke_width) << "\"/>\n";
        os << "</g>\n";
      }
    }
    os << "</svg>\n";
  }

  void save(const std::string &path) const {
    std::ofstream os(path);
    if (!os) throw Error("cannot open " + path + " for writing");
    write(os);
  }

 private:
  static std::string fmt(double v) {
    std::ostringstream s;
    s.setf(std::ios::fixed);
    s.precision(3);
    s << v;
    return s.str();
  }

  void write_underlay(std::ostream &os) const {
    const double lo = underlay_.min_value();
    const double hi = underlay_.max_value();
    const double scale = hi > lo ? 255.0 / (hi - lo) : 0.0;
    os << "<g shape-rendering=\"crispEdges\">\n";
    for (int y = 0; y < underlay_.height(); ++y) {
      int x = 0;
      while (x < underlay_.width()) {
        const int g = static_cast<int>(std::lround((underlay_(x, y) - lo) * scale));
        int run = 1;
        while (x + run < underlay_.width() &&
               static_cast<int>(std::lround((underlay_(x + run, y) - lo) * scale)) == g)
          ++run;
        os << "<rect x=\"" << x - 0.5 << "\" y=\"" << y - 0.5 << "\" width=\"" << run
           << "\" height=\"1\" fill=\"rgb(" << g << ',' << g << ',' << g << ")\"/>\n";
        x += run;
      }
    }
    os << "</g>\n";
  }

  int width_;
  int height_;
  GrayImage underlay_;
  std::vector<SvgLayer> layers_;
};

}  // namespace rsnake
