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


#ifndef FVDET__KITTIO__DETECTOR_HPP_
#define FVDET__KITTIO__DETECTOR_HPP_

#include <vector>

#include "fvdet/eval/average_precision.hpp"
#include "fvdet/frustum/point_set.hpp"
#include "fvdet/kittio/config.hpp"
#include "fvdet/nnet/pgnet.hpp"
#include "fvdet/nnet/penet.hpp"
#include "fvdet/proposal/anchors.hpp"
#include "fvdet/proposal/codec.hpp"

namespace fvdet::kittio
{

/// Decodes every (cell, prior) slot of every head. Priors of head i are the
/// priors with scale_index i, in file order.
std::vector<proposal::Proposal3D> decode_heads(const std::vector<nnet::Tensor> & heads,
                                               const std::vector<proposal::GridSpec> & grids,
                                               const std::vector<proposal::AnchorPrior> & priors,
                                               double max_radius, int num_classes);

/// A stage-1 proposal tagged with its merged class (Car or Person).
struct ClassProposal
{
  proposal::Proposal3D proposal;  // confidence = objectness x class score
  ClassId cls = ClassId::kCar;
};

/// Per stage-1 class: score = confidence x class probability, threshold,
/// cap to the best `max_candidates`, then NMS. Car proposals first.
std::vector<ClassProposal> select_proposals(const std::vector<proposal::Proposal3D> & all,
                                            const ProposalSettings & settings, int num_classes);

struct StageTimes
{
  double projection_ms = 0.0;
  double network_ms = 0.0;
  double decode_ms = 0.0;
  double nms_ms = 0.0;
  double extrusion_ms = 0.0;
  double box_ms = 0.0;
};

class Detector
{
public:
  Detector(PipelineConfig cfg, nnet::PGNet pgnet, nnet::PENet penet,
           std::vector<proposal::AnchorPrior> priors);

  /// Stage 1 only: map, network, decode, per-class NMS.
  std::vector<ClassProposal> propose(const PointCloud & cloud, StageTimes * times = nullptr);

  /// Full pipeline; boxes in the sensor frame. Deterministic for a given
  /// cloud and sample id.
  std::vector<eval::Detection> detect(const PointCloud & cloud, int sample,
                                      StageTimes * times = nullptr);

  const PipelineConfig & config() const { return cfg_; }

private:
  PipelineConfig cfg_;
  nnet::PGNet pgnet_;
  nnet::PENet penet_;
  std::vector<proposal::AnchorPrior> priors_;
  std::vector<proposal::GridSpec> grids_;
};

}  // namespace fvdet::kittio

#endif  // FVDET__KITTIO__DETECTOR_HPP_
