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


#ifndef FVDET__PROPOSAL__ANCHORS_HPP_
#define FVDET__PROPOSAL__ANCHORS_HPP_

#include <cstdint>
#include <filesystem>
#include <utility>
#include <vector>

namespace fvdet::proposal
{

/// Width/height template on the upscaled map plus the output scale it feeds.
struct AnchorPrior
{
  double width = 1.0;
  double height = 1.0;
  int scale_index = 0;

  bool operator==(const AnchorPrior &) const = default;
};

struct BoxSize
{
  double w = 0.0;
  double h = 0.0;
};

/// K-means over (w, h) with squared Euclidean distance and seeded k-means++
/// initialisation. Centroids come back sorted by area, ascending; entry i
/// is assigned scale floor(i * num_scales / K). Throws when there are fewer
/// boxes than K.
std::vector<AnchorPrior> cluster_anchors(const std::vector<BoxSize> & boxes, int k,
                                         std::uint64_t seed, int num_scales = 3);

/// Text format: one "p_w p_h scale_index" line per prior.
void write_anchors(const std::vector<AnchorPrior> & priors, const std::filesystem::path & path);
std::vector<AnchorPrior> read_anchors(const std::filesystem::path & path);

/// Priors belonging to `scale`, in file order, with their global indices.
std::vector<std::pair<int, AnchorPrior>> priors_for_scale(const std::vector<AnchorPrior> & priors,
                                                          int scale);

}  // namespace fvdet::proposal

#endif  // FVDET__PROPOSAL__ANCHORS_HPP_
