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


#ifndef FVDET__EVAL__IOU_HPP_
#define FVDET__EVAL__IOU_HPP_

#include <array>
#include <vector>

#include "fvdet/core/geometry.hpp"
#include "fvdet/proposal/box2d.hpp"

namespace fvdet::eval
{

struct Vec2
{
  double x = 0.0;
  double y = 0.0;
};

/// Footprint corners of a box in the XY plane, counter-clockwise.
std::array<Vec2, 4> footprint(const Box3D & box);

/// Signed shoelace area; positive for counter-clockwise polygons.
double polygon_area(const std::vector<Vec2> & poly);

/// Sutherland-Hodgman clip of a convex polygon by a convex counter-clockwise
/// clip polygon.
std::vector<Vec2> clip_convex(const std::vector<Vec2> & subject, const std::vector<Vec2> & clip);

/// Intersection area of the two rotated footprints; below 1e-12 counts as 0.
double bev_intersection_area(const Box3D & a, const Box3D & b);

/// Rotated-rectangle IoU in the XY plane.
double iou_bev(const Box3D & a, const Box3D & b);

/// Volume IoU with vertical extents [cz - h/2, cz + h/2].
double iou_3d(const Box3D & a, const Box3D & b);

/// Axis-aligned IoU of front-view map boxes.
double iou_2d_map(const proposal::MapBox & a, const proposal::MapBox & b);

}  // namespace fvdet::eval

#endif  // FVDET__EVAL__IOU_HPP_
