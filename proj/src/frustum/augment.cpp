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


#include "fvdet/frustum/augment.hpp"

namespace fvdet::frustum
{

AugmentParams sample_augment_params(Rng & rng, const AugmentRanges & ranges)
{
  AugmentParams p;
  p.flip = rng.bernoulli(ranges.flip_probability);
  p.rotation = rng.uniform(-ranges.max_rotation, ranges.max_rotation);
  for (auto & j : p.center_jitter) {
    j = rng.uniform(-ranges.center_jitter, ranges.center_jitter);
  }
  for (auto & s : p.size_scale) {
    s = rng.uniform(ranges.size_scale_min, ranges.size_scale_max);
  }
  return p;
}

Augmented augment(const ObjectPointSet & pts, const Box3D & gt_box, const AugmentParams & params)
{
  Augmented out{pts, gt_box, gt_box};
  if (params.flip) {
    for (auto & p : out.points.points) {
      p.y = -p.y;
    }
    out.box.cy = -out.box.cy;
    out.box.heading = normalize_angle(-out.box.heading);
  }
  if (params.rotation != 0.0) {
    for (auto & p : out.points.points) {
      p = rotate_about_z(p, params.rotation);
    }
    const Point3 c = rotate_about_z({out.box.cx, out.box.cy, out.box.cz, 0.0}, params.rotation);
    out.box.cx = c.x;
    out.box.cy = c.y;
    out.box.heading = normalize_angle(out.box.heading + params.rotation);
  }
  out.crop_box = perturb_box(out.box, params);
  return out;
}

Box3D perturb_box(const Box3D & box, const AugmentParams & params)
{
  Box3D b = box;
  b.cx += params.center_jitter[0];
  b.cy += params.center_jitter[1];
  b.cz += params.center_jitter[2];
  b.h *= params.size_scale[0];
  b.w *= params.size_scale[1];
  b.l *= params.size_scale[2];
  return b;
}

Augmented augment(const ObjectPointSet & pts, const Box3D & gt_box, Rng & rng,
                  const AugmentRanges & ranges)
{
  return augment(pts, gt_box, sample_augment_params(rng, ranges));
}

}  // namespace fvdet::frustum
