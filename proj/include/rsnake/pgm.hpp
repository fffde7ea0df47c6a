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
 * @file pgm.hpp
 * @brief PGM (P2 ASCII / P5 binary) reading and P5 writing.
 */

#pragma once

#include "rsnake/image.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <string>
#include <string_view>
#include <vector>

namespace rsnake {

namespace detail {

class PgmCursor {
 public:
  explicit PgmCursor(std::string_view bytes) : bytes_(bytes) {}

  std::size_t offset() const { return pos_; }
  bool at_end() const { return pos_ >= bytes_.size(); }

  // Skip whitespace and '#' comments running to end of line.
  void skip_separators() {
    while (pos_ < bytes_.size()) {
      const char c = bytes_[pos_];
      if (c == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n' && bytes_[pos_] != '\r') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  unsigned long read_uint(const char *what) {
    skip_separators();
    const std::size_t start = pos_;
    unsigned long v = 0;
    while (pos_ < bytes_.size() && std::isdigit(static_cast<unsigned char>(bytes_[pos_]))) {
      v = v * 10 + static_cast<unsigned long>(bytes_[pos_] - '0');
      if (v > 0xFFFFFFFFul) throw ParseError(std::string("value too large for ") + what, start);
      ++pos_;
    }
    if (pos_ == start) {
      if (at_end()) throw ParseError(std::string("unexpected end of data while reading ") + what, pos_);
      throw ParseError(std::string("expected an unsigned integer for ") + what, pos_);
    }
    return v;
  }

  void skip_to(std::size_t pos) { pos_ = pos; }

  // Exactly one whitespace byte separates the header from a binary raster.
  void expect_single_whitespace() {
    if (at_end() || !std::isspace(static_cast<unsigned char>(bytes_[pos_])))
      throw ParseError("expected whitespace after maxval", pos_);
    ++pos_;
  }

  unsigned char byte() { return static_cast<unsigned char>(bytes_[pos_++]); }
  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parse an in-memory PGM. Pixel values are returned unscaled (0..maxval).
inline GrayImage parse_pgm(std::string_view bytes) {
  if (bytes.size() < 2) throw ParseError("truncated header", bytes.size());
  if (bytes[0] != 'P' || (bytes[1] != '2' && bytes[1] != '5'))
    throw ParseError("unsupported magic number (expected P2 or P5)", 0);
  const bool binary = bytes[1] == '5';

  detail::PgmCursor cur(bytes);
  cur.skip_to(2);
  const std::size_t width_at = cur.offset();
  const unsigned long width = cur.read_uint("width");
  const unsigned long height = cur.read_uint("height");
  if (width == 0 || height == 0) throw ParseError("image dimensions must be positive", width_at);
  if (width > 1u << 20 || height > 1u << 20) throw ParseError("image dimensions too large", width_at);
  const std::size_t maxval_at = cur.offset();
  const unsigned long maxval = cur.read_uint("maxval");
  if (maxval == 0 || maxval > 65535) throw ParseError("maxval must be in 1..65535", maxval_at);

  GrayImage img(static_cast<int>(width), static_cast<int>(height));
  auto pixels = img.data();
  if (binary) {
    cur.expect_single_whitespace();
    const std::size_t bpp = maxval < 256 ? 1 : 2;
    if (cur.remaining() < pixels.size() * bpp)
      throw ParseError("truncated pixel data: need " + std::to_string(pixels.size() * bpp) + " bytes, have " +
                           std::to_string(cur.remaining()),
                       cur.offset());
    for (double &v : pixels) {
      unsigned value = cur.byte();
      if (bpp == 2) value = (value << 8) | cur.byte();
      if (value > maxval) throw ParseError("pixel value exceeds maxval", cur.offset() - bpp);
      v = value;
    }
  } else {
    for (double &v : pixels) {
      const std::size_t at = cur.offset();
      const unsigned long value = cur.read_uint("pixel");
      if (value > maxval) throw ParseError("pixel value exceeds maxval", at);
      v = static_cast<double>(value);
    }
  }
  return img;
}

inline GrayImage read_pgm(const std::string &path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot open " + path);
  const std::string bytes((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  return parse_pgm(bytes);
}

/// Encode as binary P5. Values are rounded and clamped to [0, maxval]; maxval is 255 or 65535.
inline std::string encode_pgm(const GrayImage &img, unsigned maxval = 255) {
  if (maxval != 255 && maxval != 65535) throw ParameterError("PGM maxval must be 255 or 65535");
  std::string out = "P5\n" + std::to_string(img.width()) + " " + std::to_string(img.height()) + "\n" +
                    std::to_string(maxval) + "\n";
  out.reserve(out.size() + img.size() * (maxval == 255 ? 1 : 2));
  for (double v : img.data()) {
    const double r = std::clamp(std::round(v), 0.0, static_cast<double>(maxval));
    const unsigned u = static_cast<unsigned>(r);
    if (maxval == 65535) out.push_back(static_cast<char>(u >> 8));
    out.push_back(static_cast<char>(u & 0xFF));
  }
  return out;
}

/// Smallest maxval (255 or 65535) that represents the image without clamping.
inline unsigned pgm_maxval_for(const GrayImage &img) { return img.max_value() > 255.5 ? 65535u : 255u; }

inline void write_pgm(const GrayImage &img, const std::string &path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open " + path + " for writing");
  const std::string bytes = encode_pgm(img, pgm_maxval_for(img));
  os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

/// Min-max rescale to 0..255 and write; used to dump feature fields for inspection.
inline void write_pgm_scaled(const GrayImage &img, const std::string &path) {
  const double lo = img.min_value();
  const double hi = img.max_value();
  const double scale = hi > lo ? 255.0 / (hi - lo) : 0.0;
  write_pgm(map_pixels(img, [&](double v) { return (v - lo) * scale; }), path);
}

}  // namespace rsnake
