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

#ifndef FVDET__FVPROJ__PROJECTION_HPP_
#define FVDET__FVPROJ__PROJECTION_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "fvdet/core/geometry.hpp"

namespace fvdet::fvproj
{

/// Angular window and grid shape of the cylindrical front view.
///
/// Rows index the elevation angle theta and columns the azimuth phi. Cell
/// (u, v) covers theta in [theta_min + u * delta_theta, theta_min + (u + 1) *
/// delta_theta) and likewise for phi.
struct ProjectionConfig
{
  double delta_theta = 0.0;
  double delta_phi = 0.0;
  double theta_min = 0.0;
  double phi_min = 0.0;
  int height = 48;
  int width = 192;
  int upscaled_height = 128;
  int upscaled_width = 512;
  /// Maximum radial distance reachable by the sensor, in meters.
  double max_radius = 80.0;
  /// Horizontal half-angle (radians) of the admitted field of view, measured
  /// as atan2(y, x). Also rejects returns behind the sensor.
  std::optional<double> fov_limit;

  /// theta in [-24.8 deg, 2.0 deg], phi in [-45 deg, 45 deg] over 48 x 192,
  /// R = 80 m, FOV limited to +-45 deg.
  static ProjectionConfig kitti_default();

  double theta_max() const { return theta_min + height * delta_theta; }
  double phi_max() const { return phi_min + width * delta_phi; }
  /// Upscaled pixels per base cell along rows / columns.
  double row_scale() const { return static_cast<double>(upscaled_height) / height; }
  double col_scale() const { return static_cast<double>(upscaled_width) / width; }

  /// Throws std::invalid_argument on a config violating its invariants.
  void validate() const;
};

struct Angles
{
  double theta = 0.0;
  double phi = 0.0;
};

/// theta = asin(z / |p|), phi = asin(y / sqrt(x^2 + y^2)). Returns nullopt
/// for points on the Z axis (including the origin), where phi is undefined.
std::optional<Angles> angles_of_point(const Point3 & p);

struct PixelCoord
{
  int u = 0;  // row, elevation axis
  int v = 0;  // column, azimuth axis

  bool operator==(const PixelCoord &) const = default;
};

enum class ProjectStatus { kOk, kOutOfWindow, kDegenerate };

struct ProjectResult
{
  ProjectStatus status = ProjectStatus::kOutOfWindow;
  PixelCoord pixel;

  bool ok() const { return status == ProjectStatus::kOk; }
};

ProjectResult project_point(const Point3 & p, const ProjectionConfig & cfg);

/// Cell index for an already computed angle pair; no FOV check.
ProjectResult cell_of_angles(const Angles & a, const ProjectionConfig & cfg);

/// H x W grid of (height, radial, intensity) with occupancy and the index of
/// the point that filled each cell.
class FrontViewMap
{
public:
  static constexpr int kChannels = 3;
  enum Channel { kHeight = 0, kRadial = 1, kIntensity = 2 };

  FrontViewMap() = default;
  FrontViewMap(int height, int width);

  int height() const { return height_; }
  int width() const { return width_; }

  double channel(int u, int v, int c) const { return data_[offset(u, v) + c]; }
  bool occupied(int u, int v) const { return occupancy_[cell(u, v)] != 0; }
  /// Index into the source cloud, or -1 for empty / unknown cells.
  std::int64_t provenance(int u, int v) const { return provenance_[cell(u, v)]; }

  void set(int u, int v, double height, double radial, double intensity,
           std::int64_t source);
  void clear(int u, int v);

  std::size_t occupied_count() const;
  const std::vector<double> & data() const { return data_; }

  bool operator==(const FrontViewMap &) const = default;

private:
  std::size_t cell(int u, int v) const
  {
    return static_cast<std::size_t>(u) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(v);
  }
  std::size_t offset(int u, int v) const { return cell(u, v) * kChannels; }

  int height_ = 0;
  int width_ = 0;
  std::vector<double> data_;
  std::vector<std::uint8_t> occupancy_;
  std::vector<std::int64_t> provenance_;
};

struct ProjectionStats
{
  std::size_t projected = 0;      // in-window points
  std::size_t degenerate = 0;     // skipped, phi undefined
  std::size_t out_of_window = 0;  // outside the grid or the FOV limit
};

struct ProjectionOutput
{
  FrontViewMap map;
  ProjectionStats stats;
};

/// Fills one cell per in-window point; on collisions the smallest radial
/// distance wins and ties go to the lower point index. The result does not
/// depend on `threads`.
ProjectionOutput build_front_view_map(const PointCloud & cloud, const ProjectionConfig & cfg,
                                      int threads = 1);

/// Nearest-neighbour resize with source index floor(u * H_src / H_dst).
FrontViewMap upscale_nearest(const FrontViewMap & map, int target_height, int target_width);

/// Packed 8-bit RGB, row-major, top row first.
struct RgbImage
{
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;

  std::array<std::uint8_t, 3> at(int row, int col) const;
};

/// Channels to R, G, B with per-channel min-max normalization over occupied
/// cells; a channel with zero range maps to 255. Empty cells stay black.
/// Image row 0 holds the highest elevation (map row H - 1).
RgbImage render_map(const FrontViewMap & map);

}  // namespace fvdet::fvproj

#endif  // FVDET__FVPROJ__PROJECTION_HPP_
