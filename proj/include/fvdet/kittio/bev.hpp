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


#ifndef FVDET__KITTIO__BEV_HPP_
#define FVDET__KITTIO__BEV_HPP_

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "fvdet/core/geometry.hpp"
#include "fvdet/fvproj/projection.hpp"

namespace fvdet::kittio
{

/// Orthographic top-down raster. Image row grows with decreasing x, column
/// with decreasing y, so forward is up and left is left.
struct BevConfig
{
  double meters_per_pixel = 0.1;
  double x_min = 0.0;
  double x_max = 80.0;
  double y_min = -40.0;
  double y_max = 40.0;

  int width() const;
  int height() const;
  /// Pixel (row, col) of a point, or false when it falls outside.
  bool to_pixel(double x, double y, int & row, int & col) const;
};

struct BevBox
{
  Box3D box;
  std::array<std::uint8_t, 3> color{0, 255, 0};
};

/// Integer line from (r0, c0) to (r1, c1) inclusive, Bresenham order.
std::vector<std::array<int, 2>> raster_line(int r0, int c0, int r1, int c1);

/// Points in white, box footprints outlined in their color.
fvproj::RgbImage render_bev(const PointCloud & cloud, const std::vector<BevBox> & boxes,
                            const BevConfig & cfg = {});
void render_bev(const PointCloud & cloud, const std::vector<BevBox> & boxes,
                const std::filesystem::path & path, const BevConfig & cfg = {});

}  // namespace fvdet::kittio

#endif  // FVDET__KITTIO__BEV_HPP_
