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

#include "rsnake/pgm.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <string>

using namespace rsnake;

TEST(Pgm, BinaryPayload) {
  const std::string bytes = std::string("P5 2 2 255\n") + std::string("\x00\x80\xff\x40", 4);
  const GrayImage img = parse_pgm(bytes);
  ASSERT_EQ(img.width(), 2);
  ASSERT_EQ(img.height(), 2);
  EXPECT_EQ(img(0, 0), 0);
  EXPECT_EQ(img(1, 0), 128);
  EXPECT_EQ(img(0, 1), 255);
  EXPECT_EQ(img(1, 1), 64);
}

TEST(Pgm, AsciiAndBinaryAgree) {
  const GrayImage a = parse_pgm("P2\n# comment\n3 1\n255\n7 200 13\n");
  const GrayImage b = parse_pgm(std::string("P5\n3 1\n255\n") + std::string("\x07\xc8\x0d", 3));
  EXPECT_EQ(a, b);
}

TEST(Pgm, SixteenBitBigEndian) {
  const GrayImage img = parse_pgm(std::string("P5 2 1 65535\n") + std::string("\x01\x02\xff\xff", 4));
  EXPECT_EQ(img(0, 0), 258);
  EXPECT_EQ(img(1, 0), 65535);
}

TEST(Pgm, RoundTripThroughFile) {
  GrayImage img(5, 4);
  for (int y = 0; y < 4; ++y)
    for (int x = 0; x < 5; ++x) img(x, y) = (x * 37 + y * 91) % 256;
  const auto path = std::filesystem::temp_directory_path() / "rsnake_roundtrip.pgm";
  write_pgm(img, path.string());
  EXPECT_EQ(read_pgm(path.string()), img);
  std::filesystem::remove(path);

  GrayImage wide(3, 1);
  wide(0, 0) = 1000;
  wide(2, 0) = 65535;
  EXPECT_EQ(parse_pgm(encode_pgm(wide, pgm_maxval_for(wide))), wide);
}

TEST(Pgm, MalformedInputsReportOffsets) {
  EXPECT_THROW(parse_pgm("P6 1 1 255\n\x01"), ParseError);
  EXPECT_THROW(parse_pgm("P5 2 2 255\n\x01\x02"), ParseError);
  EXPECT_THROW(parse_pgm("P5 x 2 255\n"), ParseError);
  EXPECT_THROW(parse_pgm("P2 2 1 255\n3\n"), ParseError);
  EXPECT_THROW(parse_pgm("P2 1 1 255\n300\n"), ParseError);
  try {
    parse_pgm("P5 2 2 255\n\x01\x02");
    FAIL();
  } catch (const ParseError &e) {
    EXPECT_NE(std::string(e.what()).find("offset"), std::string::npos) << e.what();
  }
}

TEST(Pgm, MissingFile) { EXPECT_THROW(read_pgm("/nonexistent/dir/img.pgm"), Error); }
