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


#include "fvdet/kittio/bev.hpp"

#include <cmath>
#include <cstdlib>

#include "fvdet/fvproj/map_io.hpp"

namespace fvdet::kittio
{

int BevConfig::width() const
{
  return static_cast<int>(std::ceil((y_max - y_min) / meters_per_pixel));
}

int BevConfig::height() const
{
  return static_cast<int>(std::ceil((x_max - x_min) / meters_per_pixel));
}

bool BevConfig::to_pixel(double x, double y, int & row, int & col) const
{
  row = static_cast<int>(std::floor((x_max - x) / meters_per_pixel));
  col = static_cast<int>(std::floor((y_max - y) / meters_per_pixel));
  return row >= 0 && row < height() && col >= 0 && col < width();
}

std::vector<std::array<int, 2>> raster_line(int r0, int c0, int r1, int c1)
{
  std::vector<std::array<int, 2>> out;
  const int dr = std::abs(r1 - r0);
  const int dc = -std::abs(c1 - c0);
  const int sr = r0 < r1 ? 1 : -1;
  const int sc = c0 < c1 ? 1 : -1;
  int err = dr + dc;
  while (true) {
    out.push_back({r0, c0});
    if (r0 == r1 && c0 == c1) break;
    const int e2 = 2 * err;
    if (e2 >= dc) {
      err += dc;
      r0 += sr;
    }
    if (e2 <= dr) {
      err += dr;
      c0 += sc;
    }
  }
  return out;
}

fvproj::RgbImage render_bev(const PointCloud & cloud, const std::vector<BevBox> & boxes,
                            const BevConfig & cfg)
{
  fvproj::RgbImage img;
  img.width = cfg.width();
  img.height = cfg.height();
  img.pixels.assign(static_cast<std::size_t>(img.width) * img.height * 3, 0);
  auto put = [&img](int row, int col, const std::array<std::uint8_t, 3> & c) {
    if (row < 0 || row >= img.height || col < 0 || col >= img.width) return;
    const std::size_t o = (static_cast<std::size_t>(row) * img.width + col) * 3;
    img.pixels[o] = c[0];
    img.pixels[o + 1] = c[1];
    img.pixels[o + 2] = c[2];
  };
  for (const auto & p : cloud.points) {
    int row = 0;
    int col = 0;
    if (cfg.to_pixel(p.x, p.y, row, col)) put(row, col, {255, 255, 255});
  }
  for (const auto & b : boxes) {
    const auto corners = box_corners(b.box);
    for (int i = 0; i < 4; ++i) {
      const auto & a = corners[static_cast<std::size_t>(i)];
      const auto & c = corners[static_cast<std::size_t>((i + 1) % 4)];
      // Unclamped pixel coordinates so partially visible edges still draw.
      const int r0 = static_cast<int>(std::floor((cfg.x_max - a.x) / cfg.meters_per_pixel));
      const int c0 = static_cast<int>(std::floor((cfg.y_max - a.y) / cfg.meters_per_pixel));
      const int r1 = static_cast<int>(std::floor((cfg.x_max - c.x) / cfg.meters_per_pixel));
      const int c1 = static_cast<int>(std::floor((cfg.y_max - c.y) / cfg.meters_per_pixel));
      for (const auto & px : raster_line(r0, c0, r1, c1)) put(px[0], px[1], b.color);
    }
  }
  return img;
}

void render_bev(const PointCloud & cloud, const std::vector<BevBox> & boxes,
                const std::filesystem::path & path, const BevConfig & cfg)
{
  fvproj::write_ppm(render_bev(cloud, boxes, cfg), path);
}

}  // namespace fvdet::kittio
