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


#ifndef FVDET__FRUSTUM__AUGMENT_HPP_
#define FVDET__FRUSTUM__AUGMENT_HPP_

#include <array>

#include "fvdet/core/geometry.hpp"
#include "fvdet/core/rng.hpp"
#include "fvdet/frustum/point_set.hpp"

namespace fvdet::frustum
{

struct AugmentRanges
{
  double flip_probability = 0.5;
  double max_rotation = kPi / 10.0;
  double center_jitter = 0.1;    // meters, per axis
  double size_scale_min = 0.95;
  double size_scale_max = 1.05;
};

/// One concrete draw of the augmentation, applied in this order: mirror
/// y -> -y, rotate about Z by `rotation`, then perturb the crop box.
struct AugmentParams
{
  bool flip = false;
  double rotation = 0.0;
  std::array<double, 3> center_jitter{};
  std::array<double, 3> size_scale{1.0, 1.0, 1.0};  // h, w, l
};

AugmentParams sample_augment_params(Rng & rng, const AugmentRanges & ranges = {});

struct Augmented
{
  ObjectPointSet points;
  /// Regression target: flipped and rotated, never perturbed.
  Box3D box;
  /// Perturbed copy of `box`, used to derive the training crop region.
  Box3D crop_box;
};

Augmented augment(const ObjectPointSet & pts, const Box3D & gt_box, const AugmentParams & params);

/// Applies only the crop perturbation of `params` to a box in any frame.
Box3D perturb_box(const Box3D & box, const AugmentParams & params);
Augmented augment(const ObjectPointSet & pts, const Box3D & gt_box, Rng & rng,
                  const AugmentRanges & ranges = {});

}  // namespace fvdet::frustum

#endif  // FVDET__FRUSTUM__AUGMENT_HPP_
