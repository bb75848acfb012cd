// Copyright 2026 The fvdet Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "fvdet/core/rng.hpp"
#include "fvdet/fvproj/map_io.hpp"
#include "fvdet/fvproj/projection.hpp"
#include "oracles.hpp"

namespace fvdet::fvproj
{
namespace
{

constexpr double kDeg = kPi / 180.0;

ProjectionConfig cfg() { return ProjectionConfig::kitti_default(); }

/// A point at elevation theta and azimuth phi with horizontal range rho.
Point3 at_angles(double theta, double phi, double rho, double intensity = 0.0)
{
  return {rho * std::cos(phi), rho * std::sin(phi), rho * std::tan(theta), intensity};
}

TEST(Angles, OnAxisAndDiagonal)
{
  const auto a = angles_of_point({1, 0, 0, 0});
  ASSERT_TRUE(a);
  EXPECT_EQ(a->theta, 0.0);
  EXPECT_EQ(a->phi, 0.0);
  const auto b = angles_of_point({1, 1, 0, 0});
  ASSERT_TRUE(b);
  EXPECT_NEAR(b->phi, kPi / 4, 1e-15);
}

TEST(Angles, PythagoreanTriples)
{
  // |(3, 4)| = 5 and |(3, 4, 12)| = 13.
  const auto a = angles_of_point({3, 4, 12, 0});
  ASSERT_TRUE(a);
  EXPECT_DOUBLE_EQ(a->theta, std::asin(12.0 / 13.0));
  EXPECT_DOUBLE_EQ(a->phi, std::asin(4.0 / 5.0));
}

TEST(Angles, DegenerateOnZAxis)
{
  EXPECT_FALSE(angles_of_point({0, 0, 0, 0}));
  EXPECT_FALSE(angles_of_point({0, 0, 5, 0}));
  EXPECT_EQ(project_point({0, 0, 5, 0}, cfg()).status, ProjectStatus::kDegenerate);
}

TEST(ProjectPoint, WindowCornerAndFloor)
{
  const auto c = cfg();
  // Half a cell inside the corner avoids rounding at the exact bound.
  auto r = project_point(at_angles(c.theta_min + 0.5 * c.delta_theta, c.phi_min + 0.5 * c.delta_phi, 10), c);
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r.pixel, (PixelCoord{0, 0}));
  r = project_point(at_angles(c.theta_min + 1.5 * c.delta_theta, 0.0, 10), c);
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r.pixel.u, 1);
  // Exact window corner goes through cell_of_angles without trig round trips.
  const auto corner = cell_of_angles({c.theta_min, c.phi_min}, c);
  ASSERT_TRUE(corner.ok());
  EXPECT_EQ(corner.pixel, (PixelCoord{0, 0}));
}

TEST(ProjectPoint, OutOfWindowAndFov)
{
  const auto c = cfg();
  EXPECT_EQ(project_point(at_angles(5 * kDeg, 0, 10), c).status, ProjectStatus::kOutOfWindow);
  EXPECT_EQ(project_point(at_angles(-30 * kDeg, 0, 10), c).status, ProjectStatus::kOutOfWindow);
  // Behind the sensor: asin gives an in-window phi, the FOV limit rejects it.
  EXPECT_EQ(project_point({-10, 1, -1, 0}, c).status, ProjectStatus::kOutOfWindow);
}

TEST(ProjectPoint, MatchesIntervalScanOracle)
{
  const auto c = cfg();
  Rng rng(101);
  int checked = 0;
  while (checked < 10000) {
    const double theta = rng.uniform(c.theta_min, c.theta_max());
    const double phi = rng.uniform(c.phi_min, c.phi_max());
    const Point3 p = at_angles(theta, phi, rng.uniform(1, 80), rng.uniform());
    int u = 0;
    int v = 0;
    if (!test::interval_scan_cell(p, c, u, v)) continue;
    const auto r = project_point(p, c);
    ASSERT_TRUE(r.ok());
    EXPECT_EQ(r.pixel.u, u);
    EXPECT_EQ(r.pixel.v, v);
    ++checked;
  }
}

TEST(ProjectPoint, AzimuthStepAdvancesColumn)
{
  const auto c = cfg();
  Rng rng(8);
  for (int i = 0; i < 200; ++i) {
    const int v = static_cast<int>(rng.index(static_cast<std::size_t>(c.width - 1)));
    const double frac = rng.uniform(0.2, 0.8);
    const double phi = c.phi_min + (v + frac) * c.delta_phi;
    const auto a = project_point(at_angles(-10 * kDeg, phi, 20), c);
    const auto b = project_point(at_angles(-10 * kDeg, phi + c.delta_phi, 20), c);
    ASSERT_TRUE(a.ok() && b.ok());
    EXPECT_EQ(b.pixel.v, a.pixel.v + 1);
  }
}

TEST(BuildMap, EmptyCloud)
{
  const auto out = build_front_view_map({}, cfg());
  EXPECT_EQ(out.map.height(), 48);
  EXPECT_EQ(out.map.width(), 192);
  EXPECT_EQ(out.map.occupied_count(), 0u);
  for (double v : out.map.data()) EXPECT_EQ(v, 0.0);
}

TEST(BuildMap, SinglePointChannels)
{
  // A wider window so (3, 4, 12) is in range: theta = asin(12/13).
  ProjectionConfig c = cfg();
  c.theta_min = -80 * kDeg;
  c.delta_theta = 160 * kDeg / c.height;
  c.phi_min = -80 * kDeg;
  c.delta_phi = 160 * kDeg / c.width;
  c.fov_limit.reset();
  PointCloud cloud;
  cloud.points.push_back({3, 4, 12, 0.5});
  const auto out = build_front_view_map(cloud, c);
  const auto r = project_point(cloud.points[0], c);
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(out.map.occupied_count(), 1u);
  EXPECT_EQ(out.map.channel(r.pixel.u, r.pixel.v, FrontViewMap::kHeight), 12.0);
  EXPECT_EQ(out.map.channel(r.pixel.u, r.pixel.v, FrontViewMap::kRadial), 5.0);
  EXPECT_EQ(out.map.channel(r.pixel.u, r.pixel.v, FrontViewMap::kIntensity), 0.5);
}

TEST(BuildMap, NearestRadialWins)
{
  const auto c = cfg();
  PointCloud cloud;
  const double th = -5 * kDeg;
  cloud.points.push_back(at_angles(th, 0.001, 7.0, 0.7));
  cloud.points.push_back(at_angles(th, 0.001, 5.0, 0.5));
  const auto out = build_front_view_map(cloud, c);
  const auto r = project_point(cloud.points[1], c);
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(out.map.provenance(r.pixel.u, r.pixel.v), 1);
  EXPECT_EQ(out.map.channel(r.pixel.u, r.pixel.v, FrontViewMap::kIntensity), 0.5);
}

TEST(BuildMap, SortThenFirstOracleAndChannelFidelity)
{
  const auto c = cfg();
  Rng rng(77);
  PointCloud cloud;
  for (int i = 0; i < 20000; ++i) {
    cloud.points.push_back(at_angles(rng.uniform(-26 * kDeg, 3 * kDeg), rng.uniform(-50 * kDeg, 50 * kDeg),
                                     rng.uniform(1, 70), rng.uniform()));
  }
  // Duplicate some radial distances to exercise the index tie-break.
  for (int i = 0; i < 500; ++i) cloud.points.push_back(cloud.points[static_cast<std::size_t>(i)]);
  cloud.points.push_back({0, 0, 1, 0});
  const auto out = build_front_view_map(cloud, c);

  // Oracle: sort (cell, radial, index) and keep the first entry per cell.
  struct Entry
  {
    int cell;
    double radial;
    std::size_t index;
  };
  std::vector<Entry> entries;
  std::size_t skipped = 0;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const auto r = project_point(cloud.points[i], c);
    if (!r.ok()) {
      ++skipped;
      continue;
    }
    const auto & p = cloud.points[i];
    entries.push_back({r.pixel.u * c.width + r.pixel.v, std::sqrt(p.x * p.x + p.y * p.y), i});
  }
  std::sort(entries.begin(), entries.end(), [](const Entry & a, const Entry & b) {
    if (a.cell != b.cell) return a.cell < b.cell;
    if (a.radial != b.radial) return a.radial < b.radial;
    return a.index < b.index;
  });
  std::vector<long long> expected(static_cast<std::size_t>(c.height * c.width), -1);
  for (std::size_t k = 0; k < entries.size(); ++k) {
    if (k == 0 || entries[k].cell != entries[k - 1].cell) {
      expected[static_cast<std::size_t>(entries[k].cell)] = static_cast<long long>(entries[k].index);
    }
  }
  EXPECT_EQ(out.stats.projected, cloud.size() - skipped);
  EXPECT_EQ(out.stats.degenerate, 1u);
  for (int u = 0; u < c.height; ++u) {
    for (int v = 0; v < c.width; ++v) {
      const long long e = expected[static_cast<std::size_t>(u * c.width + v)];
      ASSERT_EQ(out.map.provenance(u, v), e);
      if (e < 0) {
        EXPECT_FALSE(out.map.occupied(u, v));
        continue;
      }
      const Point3 & p = cloud.points[static_cast<std::size_t>(e)];
      EXPECT_EQ(out.map.channel(u, v, FrontViewMap::kHeight), p.z);
      EXPECT_EQ(out.map.channel(u, v, FrontViewMap::kRadial), std::sqrt(p.x * p.x + p.y * p.y));
      EXPECT_EQ(out.map.channel(u, v, FrontViewMap::kIntensity), p.intensity);
    }
  }
}

TEST(BuildMap, IndependentOfWorkerCount)
{
  Rng rng(5);
  PointCloud cloud;
  for (int i = 0; i < 50000; ++i) {
    cloud.points.push_back(at_angles(rng.uniform(-25 * kDeg, 2 * kDeg), rng.uniform(-45 * kDeg, 45 * kDeg),
                                     std::round(rng.uniform(1, 70)), rng.uniform()));
  }
  const auto one = build_front_view_map(cloud, cfg(), 1);
  for (int t : {2, 3, 8}) {
    const auto many = build_front_view_map(cloud, cfg(), t);
    EXPECT_TRUE(one.map == many.map);
  }
}

TEST(Upscale, ConstantAndBlocks)
{
  FrontViewMap m(2, 2);
  m.set(0, 0, 1, 2, 3, 0);
  m.set(0, 1, 4, 5, 6, 1);
  m.set(1, 0, 7, 8, 9, 2);
  const auto up = upscale_nearest(m, 4, 4);
  for (int u = 0; u < 4; ++u) {
    for (int v = 0; v < 4; ++v) {
      EXPECT_EQ(up.occupied(u, v), m.occupied(u / 2, v / 2));
      EXPECT_EQ(up.channel(u, v, 0), m.channel(u / 2, v / 2, 0));
    }
  }
  FrontViewMap k(3, 5);
  for (int u = 0; u < 3; ++u)
    for (int v = 0; v < 5; ++v) k.set(u, v, 1.5, 2.5, 0.5, -1);
  const auto kk = upscale_nearest(k, 7, 11);
  for (int u = 0; u < 7; ++u)
    for (int v = 0; v < 11; ++v) EXPECT_EQ(kk.channel(u, v, 1), 2.5);
  EXPECT_TRUE(upscale_nearest(m, 2, 2) == m);
  EXPECT_THROW(upscale_nearest(m, 1, 4), std::invalid_argument);
}

TEST(Upscale, IndexFormulaOracle)
{
  Rng rng(9);
  FrontViewMap m(48, 192);
  for (int u = 0; u < 48; ++u)
    for (int v = 0; v < 192; ++v)
      if (rng.bernoulli(0.6)) m.set(u, v, rng.uniform(), rng.uniform(), rng.uniform(), u * 192 + v);
  const auto up = upscale_nearest(m, 128, 512);
  for (int u = 0; u < 128; ++u) {
    for (int v = 0; v < 512; ++v) {
      const int su = u * 48 / 128;
      const int sv = v * 192 / 512;
      ASSERT_EQ(up.occupied(u, v), m.occupied(su, sv));
      for (int ch = 0; ch < 3; ++ch) ASSERT_EQ(up.channel(u, v, ch), m.channel(su, sv, ch));
    }
  }
}

TEST(Render, BlackSingleAndNormalized)
{
  FrontViewMap empty(4, 6);
  for (auto px : render_map(empty).pixels) EXPECT_EQ(px, 0);

  FrontViewMap one(4, 6);
  one.set(1, 2, -1.0, 3.0, 0.2, 0);
  const auto img1 = render_map(one);
  int lit = 0;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 6; ++c) {
      const auto px = img1.at(r, c);
      lit += px[0] || px[1] || px[2];
    }
  EXPECT_EQ(lit, 1);

  // Two cells: per-channel min-max; image row 0 is the top map row.
  FrontViewMap two(2, 2);
  two.set(0, 0, 1.0, 10.0, 0.2, 0);
  two.set(1, 1, 3.0, 20.0, 0.6, 1);
  const auto img = render_map(two);
  EXPECT_EQ(img.at(1, 0), (std::array<std::uint8_t, 3>{0, 0, 0}));
  EXPECT_EQ(img.at(0, 1), (std::array<std::uint8_t, 3>{255, 255, 255}));
  FrontViewMap three(1, 3);
  three.set(0, 0, 0.0, 0.0, 0.0, 0);
  three.set(0, 1, 1.0, 4.0, 1.0, 1);
  three.set(0, 2, 4.0, 1.0, 0.5, 2);
  const auto img3 = render_map(three);
  EXPECT_EQ(img3.at(0, 1)[0], static_cast<std::uint8_t>(std::lround(255.0 * 0.25)));
  EXPECT_EQ(img3.at(0, 2)[1], static_cast<std::uint8_t>(std::lround(255.0 * 0.25)));
  EXPECT_EQ(img3.at(0, 2)[2], static_cast<std::uint8_t>(std::lround(255.0 * 0.5)));
}

class MapIoTest : public ::testing::Test
{
protected:
  std::filesystem::path dir = std::filesystem::temp_directory_path() / "fvdet_fvproj_test";
  void SetUp() override { std::filesystem::create_directories(dir); }
  void TearDown() override { std::filesystem::remove_all(dir); }
};

TEST_F(MapIoTest, TensorRoundTripAndTruncation)
{
  FrontViewMap m(3, 4);
  m.set(0, 1, -1.5, 12.25, 0.5, 3);
  m.set(2, 3, 0.75, 3.5, 0.125, 7);
  write_map_tensor(m, dir / "m.bin");
  EXPECT_EQ(std::filesystem::file_size(dir / "m.bin"), 16u + 3 * 4 * 3 * 4);
  const auto back = read_map_tensor(dir / "m.bin");
  ASSERT_EQ(back.height(), 3);
  EXPECT_EQ(back.occupied_count(), 2u);
  EXPECT_EQ(back.channel(0, 1, 1), 12.25);
  EXPECT_EQ(back.channel(2, 3, 2), 0.125);
  std::filesystem::resize_file(dir / "m.bin", 30);
  EXPECT_THROW(read_map_tensor(dir / "m.bin"), std::runtime_error);
}

TEST_F(MapIoTest, PpmRoundTrip)
{
  FrontViewMap m(2, 3);
  m.set(0, 0, 1, 2, 3, 0);
  m.set(1, 2, 2, 3, 4, 1);
  const auto img = render_map(m);
  write_ppm(img, dir / "m.ppm");
  const auto back = read_ppm(dir / "m.ppm");
  EXPECT_EQ(back.width, 3);
  EXPECT_EQ(back.height, 2);
  EXPECT_EQ(back.pixels, img.pixels);
  std::ofstream(dir / "bad.ppm") << "P6\n3 2\n255\nabc";
  EXPECT_THROW(read_ppm(dir / "bad.ppm"), std::runtime_error);
}

}  // namespace
}  // namespace fvdet::fvproj
