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


#ifndef FVDET__KITTIO__SYNTHETIC_HPP_
#define FVDET__KITTIO__SYNTHETIC_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "fvdet/core/geometry.hpp"
#include "fvdet/fvproj/projection.hpp"
#include "fvdet/kittio/labels.hpp"

namespace fvdet::kittio
{

/// Mean and spread of (h, w, l) in meters; draws are clamped to +-2 sigma.
struct SizeDistribution
{
  double h = 1.5;
  double w = 1.6;
  double l = 3.9;
  double sigma_h = 0.0;
  double sigma_w = 0.0;
  double sigma_l = 0.0;
};

struct SceneSpec
{
  int cars = 2;
  int pedestrians = 1;
  int cyclists = 1;
  double radial_min = 5.0;
  double radial_max = 60.0;
  /// Object centers stay within +-azimuth_limit (radians).
  double azimuth_limit = 38.0 * kPi / 180.0;
  SizeDistribution car{1.53, 1.63, 3.88, 0.08, 0.08, 0.25};
  SizeDistribution pedestrian{1.76, 0.66, 0.84, 0.08, 0.06, 0.08};
  SizeDistribution cyclist{1.74, 0.60, 1.76, 0.06, 0.05, 0.10};
  /// Surface points of an object at 10 m; scales with (10 / d)^2.
  double points_at_10m = 600.0;
  int min_points = 10;
  /// Ground returns, spread uniformly over the clutter sector.
  int clutter_points = 2000;
  double clutter_azimuth = 60.0 * kPi / 180.0;
  double clutter_radial_min = 3.0;
  double clutter_radial_max = 70.0;
  double ground_z = -1.73;
  /// Keep object azimuth intervals apart so no object hides another.
  bool avoid_occlusion = true;
  int max_retries = 2000;
  std::uint64_t seed = 0;
};

std::string scene_spec_to_json(const SceneSpec & spec);
/// Keys not given keep their defaults; unknown keys throw std::runtime_error.
SceneSpec scene_spec_from_json(const std::string & text);

struct SceneObject
{
  Box3D box;
  ClassId cls = ClassId::kCar;
};

struct Scene
{
  PointCloud cloud;
  std::vector<SceneObject> objects;
};

/// Deterministic per seed. Objects rest on the ground, do not overlap in
/// the XY plane and lie inside the projection window; each emits surface
/// points on its four sides and top. Throws std::runtime_error when
/// placement fails after max_retries attempts.
Scene gen_synthetic_scene(const SceneSpec & spec,
                          const fvproj::ProjectionConfig & cfg = fvproj::ProjectionConfig::kitti_default());

/// Labels with the front-view map box of each object in the bbox field and
/// truncation / occlusion 0.
std::vector<LabeledObject> scene_labels(const Scene & scene, const fvproj::ProjectionConfig & cfg);

}  // namespace fvdet::kittio

#endif  // FVDET__KITTIO__SYNTHETIC_HPP_
