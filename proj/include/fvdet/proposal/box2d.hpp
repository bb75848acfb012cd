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


#ifndef FVDET__PROPOSAL__BOX2D_HPP_
#define FVDET__PROPOSAL__BOX2D_HPP_

namespace fvdet::proposal
{

/// Axis-aligned box on the upscaled front-view map, in pixels. `cx` runs
/// along columns (azimuth) and `cy` along rows (elevation).
struct MapBox
{
  double cx = 0.0;
  double cy = 0.0;
  double w = 0.0;
  double h = 0.0;

  double left() const { return cx - 0.5 * w; }
  double right() const { return cx + 0.5 * w; }
  double top() const { return cy - 0.5 * h; }
  double bottom() const { return cy + 0.5 * h; }
  double area() const { return w * h; }
};

double iou_2d_axis_aligned(const MapBox & a, const MapBox & b);

}  // namespace fvdet::proposal

#endif  // FVDET__PROPOSAL__BOX2D_HPP_
