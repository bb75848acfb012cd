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


#ifndef FVDET__PROPOSAL__NMS_HPP_
#define FVDET__PROPOSAL__NMS_HPP_

#include <cstddef>
#include <vector>

#include "fvdet/proposal/codec.hpp"

namespace fvdet::proposal
{

inline constexpr double kDefaultNmsIou = 0.45;
inline constexpr double kDefaultScoreThreshold = 0.1;

/// Greedy suppression in descending confidence (ties by input index) over
/// the map boxes (b_x * stride, b_y * stride, b_w, b_h). Proposals below
/// `score_threshold` are dropped first. Returns kept input indices in keep
/// order.
std::vector<std::size_t> nms_indices(const std::vector<Proposal3D> & proposals,
                                     double iou_threshold = kDefaultNmsIou,
                                     double score_threshold = kDefaultScoreThreshold);

std::vector<Proposal3D> nms(const std::vector<Proposal3D> & proposals,
                            double iou_threshold = kDefaultNmsIou,
                            double score_threshold = kDefaultScoreThreshold);

}  // namespace fvdet::proposal

#endif  // FVDET__PROPOSAL__NMS_HPP_
