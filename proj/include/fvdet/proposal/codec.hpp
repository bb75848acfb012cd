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


#ifndef FVDET__PROPOSAL__CODEC_HPP_
#define FVDET__PROPOSAL__CODEC_HPP_

#include <vector>

#include "fvdet/proposal/anchors.hpp"
#include "fvdet/proposal/box2d.hpp"

namespace fvdet::proposal
{

/// One output scale of the proposal network.
struct GridSpec
{
  int stride = 16;
  int rows = 0;
  int cols = 0;

  int cells() const { return rows * cols; }
};

/// Builds one grid per stride; throws when a stride does not divide the map.
std::vector<GridSpec> make_grids(const std::vector<int> & strides, int map_height, int map_width);

/// Values emitted per prior: [t_x, t_y, t_w, t_h, t_r1, t_r2, conf, class...].
struct RawPrediction
{
  double tx = 0.0;
  double ty = 0.0;
  double tw = 0.0;
  double th = 0.0;
  double tr1 = 0.0;
  double tr2 = 0.0;
  double conf_logit = 0.0;
  std::vector<double> class_logits;
};

inline constexpr int kBoxFields = 7;  // 4 box offsets, 2 truncated distances, confidence

inline int values_per_prior(int num_classes) { return kBoxFields + num_classes; }

/// Decoded front-view box with truncated radial distances. b_x and b_y are in
/// grid-cell units of the owning scale, b_w and b_h in map pixels, r1 and r2
/// in meters.
struct Proposal3D
{
  double bx = 0.0;
  double by = 0.0;
  double bw = 0.0;
  double bh = 0.0;
  double r1 = 0.0;
  double r2 = 0.0;
  double confidence = 0.0;
  std::vector<double> class_scores;
  int stride = 1;

  MapBox map_box() const { return {bx * stride, by * stride, bw, bh}; }
};

double sigmoid(double x);
/// Inverse of sigmoid on (0, 1).
double logit(double p);

struct Cell
{
  int cx = 0;  // column
  int cy = 0;  // row
};

/// b = (sigma(t_x) + c_x, sigma(t_y) + c_y, p_w e^t_w, p_h e^t_h),
/// r1 = t_r1 R, r2 = t_r2 R. Confidence and class scores pass through the
/// logistic function independently. No clamping.
Proposal3D decode(const RawPrediction & raw, Cell cell, const AnchorPrior & prior,
                  double max_radius, int stride = 1);

/// Exact inverse of decode. Throws std::domain_error when a center offset
/// lies outside the open interval (0, 1) or a size is not positive.
RawPrediction encode(const Proposal3D & proposal, Cell cell, const AnchorPrior & prior,
                     double max_radius);

}  // namespace fvdet::proposal

#endif  // FVDET__PROPOSAL__CODEC_HPP_
