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

#include "rsnake.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

using namespace rsnake;

TEST(Config, ParsesCommentsAndWhitespace) {
  const Config c = Config::parse("# header\n sigma = 1.5 \n\nrho=4 # trailing\r\ninit = rect\n");
  EXPECT_EQ(c.values().size(), 3u);
  EXPECT_EQ(*c.get("sigma"), "1.5");
  EXPECT_EQ(*c.get("rho"), "4");
  EXPECT_EQ(*c.get("init"), "rect");
  EXPECT_FALSE(c.get("tau"));
}

TEST(Config, MalformedLineReportsItsNumber) {
  try {
    Config::parse("sigma = 1\nrho 4\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError &e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
  }
  EXPECT_THROW(Config::parse("= 3\n"), ParseError);
}

TEST(Config, ApplyAndDumpRoundTrip) {
  SegmentParams p;
  apply_config(Config::parse("sigma = 1.25\npatience = 7\ntangential_forces = yes\ninit = rect\n"), p,
               SegmentFields{});
  EXPECT_DOUBLE_EQ(p.sigma, 1.25);
  EXPECT_EQ(p.patience, 7);
  EXPECT_TRUE(p.tangential_forces);
  EXPECT_EQ(p.init, "rect");

  std::ostringstream dumped;
  dump_config(p, SegmentFields{}, dumped);
  SegmentParams q;
  apply_config(Config::parse(dumped.str()), q, SegmentFields{});
  std::ostringstream again;
  dump_config(q, SegmentFields{}, again);
  EXPECT_EQ(dumped.str(), again.str());
}

TEST(Config, BadValuesAndUnknownKeys) {
  SegmentParams p;
  EXPECT_THROW(apply_config(Config::parse("no_such_key = 1\n"), p, SegmentFields{}), ParameterError);
  EXPECT_THROW(apply_config(Config::parse("sigma = abc\n"), p, SegmentFields{}), ParameterError);
  EXPECT_THROW(apply_config(Config::parse("patience = 1.5\n"), p, SegmentFields{}), ParameterError);
  EXPECT_THROW(apply_config(Config::parse("uniform = maybe\n"), p, SegmentFields{}), ParameterError);
  EXPECT_NO_THROW(apply_config(Config::parse("no_such_key = 1\n"), p, SegmentFields{}, false));
}

TEST(Svg, PolygonsAndUnderlay) {
  SvgWriter w(4, 3);
  GrayImage img(4, 3, 0.0);
  img(3, 2) = 1.0;
  w.set_underlay(img);
  w.add_layer({{{{0, 0}, {2, 0}, {1, 1.5}}}, "#00ff00", 0.25, 1.0, true});
  std::ostringstream os;
  w.write(os);
  const std::string s = os.str();
  EXPECT_EQ(s.rfind("<svg", 0), 0u);
  EXPECT_NE(s.find("points=\"0.000,0.000 2.000,0.000 1.000,1.500\""), std::string::npos);
  EXPECT_NE(s.find("fill=\"rgb(255,255,255)\""), std::string::npos);
  EXPECT_NE(s.find("<circle"), std::string::npos);
  EXPECT_NE(s.find("</svg>"), std::string::npos);
}

TEST(Fit, ExactLineAndNoisyLine) {
  const LinearFit f = fit_line({1, 2, 3, 4}, {3, 5, 7, 9});
  EXPECT_NEAR(f.slope, 2.0, 1e-12);
  EXPECT_NEAR(f.intercept, 1.0, 1e-12);
  EXPECT_NEAR(f.r2, 1.0, 1e-12);
  const LinearFit g = fit_line({0, 1, 2, 3}, {0, 1, 0, 1});
  EXPECT_NEAR(g.r2, 0.2, 1e-12);
  EXPECT_THROW(fit_line({1}, {1}), ParameterError);
  EXPECT_THROW(fit_line({2, 2}, {1, 3}), ParameterError);
}

TEST(Median, OddAndEven) {
  EXPECT_DOUBLE_EQ(detail::median({3, 1, 2}), 2.0);
  EXPECT_DOUBLE_EQ(detail::median({4, 1, 3, 2}), 2.5);
}

TEST(Pipeline, DiskWithDefaults) {
  const Point c{99.5, 99.5};
  const GrayImage img = gen_disk(200, c, 45.0, 1.0, 0.0);
  SegmentParams p;
  p.init_radius = 70.0;
  const SegmentResult r = segment(img, p);
  ASSERT_TRUE(r.report.converged);
  ASSERT_EQ(r.model.curves.size(), 1u);
  const std::vector<std::vector<Point>> truth{circle_outline(c, 45.0, 4096)};
  EXPECT_LE(hausdorff_distance(r.model.polygons(), truth), 1.5);
  EXPECT_EQ(r.record.vertices, r.model.vertex_count());
}

TEST(Pipeline, ObserverSeesEveryIteration) {
  BenchScene s = bench_scene(100);
  int calls = 0;
  const SegmentResult r = segment(s.image, s.params, s.seeds, [&](const SnakeModel &) { ++calls; });
  EXPECT_EQ(calls, r.report.iterations + 1);
}

TEST(Pipeline, UnknownInitShape) {
  SegmentParams p;
  p.init = "triangle";
  EXPECT_THROW(segment(gen_disk(64, {32, 32}, 10, 1, 0), p), ParameterError);
}

TEST(Experiments, CompareAdaptiveAgainstUniform) {
  CompareConfig cfg;
  cfg.repeats = 1;
  const std::vector<RunRecord> runs = run_compare(cfg);
  ASSERT_EQ(runs.size(), 3u);
  EXPECT_EQ(runs[0].id, "adaptive");
  EXPECT_EQ(runs[1].id, "uniform");
  EXPECT_EQ(runs[2].id, "coarse_to_fine");
  for (const RunRecord &r : runs) {
    EXPECT_TRUE(r.converged) << r.id;
    EXPECT_LT(r.hausdorff, 1.5) << r.id;
  }
  EXPECT_LT(runs[0].vertices, runs[1].vertices);
  EXPECT_LT(runs[0].iterations, runs[1].iterations);
}

TEST(Experiments, TopologyCsvIsDeterministic) {
  auto csv = [] {
    std::ostringstream os;
    write_topology_csv({run_topology_scene(scene_merge())}, os);
    return os.str();
  };
  const std::string a = csv();
  EXPECT_EQ(a, csv());
  EXPECT_NE(a.find("merge,1,1,1,1,"), std::string::npos) << a;
}

TEST(Experiments, VesselCurvesMatchTheComponentCount) {
  const TopologyScene s = scene_vessels(1);
  EXPECT_EQ(s.expected_curves, oracle::count_components(s.image, 0.5));
  const TopologyOutcome o = run_topology_scene(s);
  EXPECT_TRUE(o.converged);
  EXPECT_EQ(o.curves, s.expected_curves);
  EXPECT_TRUE(o.simple);
  EXPECT_TRUE(o.orientation);
}

TEST(Experiments, CircleLengthsGrowWithRadius) {
  CircleLengthsConfig cfg;
  cfg.radii = {6, 19, 55};
  const auto rows = run_circle_lengths(cfg);
  ASSERT_EQ(rows.size(), 3u);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_TRUE(rows[i].converged);
    EXPECT_GE(rows[i].mean_edge, rows[i].l_min);
    EXPECT_LE(rows[i].mean_edge, rows[i].zeta_delta);
    EXPECT_LT(rows[i].hausdorff, 1.5);
    if (i) {
      EXPECT_GT(rows[i].mean_edge, rows[i - 1].mean_edge);
    }
  }
}

TEST(Experiments, MetricTimingRowsCoverEverySize) {
  MetricTimingConfig cfg;
  cfg.sizes = {40, 60, 80};
  cfg.repeats = 1;
  const auto rows = run_metric_timing(cfg);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_DOUBLE_EQ(rows[1].pixels, 3600.0);
  for (const auto &r : rows) EXPECT_GT(r.median_seconds, 0.0);
  std::ostringstream os;
  write_metric_timing_csv(rows, os);
  EXPECT_EQ(os.str().rfind("size,pixels,median_seconds\n40,1600,", 0), 0u);
}

TEST(Experiments, NoiseLevelTable) {
  CurvatureSweepConfig cfg;
  cfg.sweep.psnrs = {std::numeric_limits<double>::infinity(), 20};
  std::ostringstream os;
  write_noise_levels_csv(cfg, os);
  EXPECT_EQ(os.str(), "psnr_db,sigma_noise,conventional_psnr_db\ninf,0,inf\n20,0.01,40\n");
}
