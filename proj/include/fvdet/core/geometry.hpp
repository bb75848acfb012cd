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

#ifndef FVDET__CORE__GEOMETRY_HPP_
#define FVDET__CORE__GEOMETRY_HPP_

#include <array>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fvdet
{

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// A single LiDAR return in the sensor frame (X forward, Y left, Z up).
struct Point3
{
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double intensity = 0.0;
};

/// Ordered LiDAR returns in the sensor frame. Indices identify points across
/// every stage of the pipeline, so order is never changed.
struct PointCloud
{
  std::vector<Point3> points;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
};

/// Amodal oriented box. `l` spans the heading axis, `w` the horizontal
/// perpendicular and `h` spans Z. The heading is measured counter-clockwise
/// from +X about +Z and kept in [0, 2pi).
struct Box3D
{
  double cx = 0.0;
  double cy = 0.0;
  double cz = 0.0;
  double h = 1.0;
  double w = 1.0;
  double l = 1.0;
  double heading = 0.0;
};

/// Final classes plus the merged stage-1 label. Person stands for
/// Pedestrian and Cyclist together.
enum class ClassId { kCar, kPedestrian, kCyclist, kPerson };

/// Wraps any finite angle into [0, 2pi).
double normalize_angle(double angle);

/// Wraps any finite angle into [-pi, pi).
double wrap_to_pi(double angle);

Point3 rotate_about_z(const Point3 & p, double angle);

/// Corner order: bottom face counter-clockwise viewed from +Z starting at the
/// (+l/2, +w/2) local corner, then the top face in the same order.
std::array<Point3, 8> box_corners(const Box3D & box);

/// Local (box frame) sign pattern of corner `i`, matching box_corners.
std::array<double, 3> corner_signs(int i);

/// Boundary points count as inside.
bool point_in_box(const Point3 & p, const Box3D & box);

/// Finite, positive sizes and heading in [0, 2pi).
bool is_valid(const Box3D & box);

/// Collapses Pedestrian and Cyclist into Person; Car is unchanged.
ClassId stage1_class(ClassId id);

/// True when `id` belongs to `query`, treating Person as the union of
/// Pedestrian and Cyclist.
bool class_matches(ClassId id, ClassId query);

std::string_view class_name(ClassId id);
std::optional<ClassId> parse_class(std::string_view name);

}  // namespace fvdet

#endif  // FVDET__CORE__GEOMETRY_HPP_
