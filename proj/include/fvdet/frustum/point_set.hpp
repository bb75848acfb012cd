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


#ifndef FVDET__FRUSTUM__POINT_SET_HPP_
#define FVDET__FRUSTUM__POINT_SET_HPP_

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "fvdet/core/geometry.hpp"
#include "fvdet/core/rng.hpp"
#include "fvdet/frustum/fragment.hpp"
#include "fvdet/fvproj/projection.hpp"

namespace fvdet::frustum
{

enum class Frame : std::uint32_t { kSensor = 0, kCanonical = 1, kNormalized = 2 };

/// Points extruded for one proposal, tagged with the frame they live in.
struct ObjectPointSet
{
  std::vector<Point3> points;
  /// Index of each point in the source cloud.
  std::vector<std::size_t> source_indices;
  Frame frame = Frame::kSensor;
  /// Azimuth removed by to_canonical (radians); 0 in the sensor frame.
  double canonical_rotation = 0.0;
  /// Mean subtracted by normalize_centroid; set iff frame is kNormalized.
  std::optional<std::array<double, 3>> centroid_offset;
  int proposal_id = -1;
};

/// Per-point projection cache so several fragments can be extruded from one
/// cloud without recomputing angles.
struct ProjectedCloud
{
  const PointCloud * cloud = nullptr;
  std::vector<fvproj::PixelCoord> pixels;
  std::vector<std::uint8_t> valid;
  std::vector<double> radial;
  /// Points grouped by base cell: indices of cell c (row-major) are
  /// cell_points[cell_start[c] .. cell_start[c + 1]), ascending.
  std::vector<std::size_t> cell_start;
  std::vector<std::size_t> cell_points;
  int width = 0;
};

ProjectedCloud project_cloud(const PointCloud & cloud, const fvproj::ProjectionConfig & cfg);

/// Points whose base-resolution cell lies inside the fragment's map box
/// (inclusive cell bounds) and whose radial distance lies in [r1, r2].
/// Input order is preserved.
ObjectPointSet extrude_points(const PointCloud & cloud, const CylinderFragment & frag,
                              const fvproj::ProjectionConfig & cfg);
ObjectPointSet extrude_points(const ProjectedCloud & projected, const CylinderFragment & frag,
                              const fvproj::ProjectionConfig & cfg);

/// Inclusive base-grid cell ranges covered by the fragment's map box.
struct CellRange
{
  int row_lo = 0;
  int row_hi = -1;
  int col_lo = 0;
  int col_hi = -1;
};
CellRange cell_range(const CylinderFragment & frag, const fvproj::ProjectionConfig & cfg);

/// Rotates sensor-frame points by minus the fragment azimuth so the frustum
/// axis lines up with +X. Throws std::invalid_argument unless pts is in the
/// sensor frame.
ObjectPointSet to_canonical(const ObjectPointSet & pts, const CylinderFragment & frag,
                            const fvproj::ProjectionConfig & cfg);
ObjectPointSet from_canonical(const ObjectPointSet & pts);

Box3D box_to_canonical(const Box3D & box, double azimuth);
Box3D box_from_canonical(const Box3D & box, double azimuth);

/// Subtracts the mean coordinate. Throws std::invalid_argument when empty.
ObjectPointSet normalize_centroid(const ObjectPointSet & pts);
ObjectPointSet denormalize_centroid(const ObjectPointSet & pts);

/// Draws `count` points with replacement.
ObjectPointSet sample_points(const ObjectPointSet & pts, std::size_t count, Rng & rng);

/// Binary layout: four little-endian uint32 (magic "FVPS", count, frame,
/// flags; bit 0 = centroid offset present), four float32 (offset x, y, z,
/// canonical rotation), then count quadruples of float32 (x, y, z,
/// intensity).
inline constexpr std::uint32_t kPointSetMagic = 0x53505646;  // "FVPS"

std::vector<char> serialize_point_set(const ObjectPointSet & pts);
ObjectPointSet deserialize_point_set(const std::vector<char> & bytes);
void write_point_set(const ObjectPointSet & pts, const std::filesystem::path & path);
ObjectPointSet read_point_set(const std::filesystem::path & path);

}  // namespace fvdet::frustum

#endif  // FVDET__FRUSTUM__POINT_SET_HPP_
