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


#include "fvdet/proposal/nms.hpp"

#include <algorithm>
#include <numeric>

#include "fvdet/proposal/box2d.hpp"

namespace fvdet::proposal
{

double iou_2d_axis_aligned(const MapBox & a, const MapBox & b)
{
  const double iw = std::min(a.right(), b.right()) - std::max(a.left(), b.left());
  const double ih = std::min(a.bottom(), b.bottom()) - std::max(a.top(), b.top());
  if (iw <= 0.0 || ih <= 0.0) {
    return 0.0;
  }
  const double inter = iw * ih;
  const double uni = a.area() + b.area() - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

std::vector<std::size_t> nms_indices(const std::vector<Proposal3D> & proposals,
                                     double iou_threshold, double score_threshold)
{
  std::vector<std::size_t> order;
  order.reserve(proposals.size());
  for (std::size_t i = 0; i < proposals.size(); ++i) {
    if (proposals[i].confidence >= score_threshold) {
      order.push_back(i);
    }
  }
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return proposals[a].confidence > proposals[b].confidence;
  });

  std::vector<MapBox> boxes(proposals.size());
  for (std::size_t i : order) {
    boxes[i] = proposals[i].map_box();
  }
  std::vector<std::size_t> kept;
  for (std::size_t i : order) {
    bool suppressed = false;
    for (std::size_t k : kept) {
      if (iou_2d_axis_aligned(boxes[i], boxes[k]) > iou_threshold) {
        suppressed = true;
        break;
      }
    }
    if (!suppressed) {
      kept.push_back(i);
    }
  }
  return kept;
}

std::vector<Proposal3D> nms(const std::vector<Proposal3D> & proposals, double iou_threshold,
                            double score_threshold)
{
  std::vector<Proposal3D> out;
  for (std::size_t i : nms_indices(proposals, iou_threshold, score_threshold)) {
    out.push_back(proposals[i]);
  }
  return out;
}

}  // namespace fvdet::proposal
