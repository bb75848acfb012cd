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


#ifndef FVDET__KITTIO__DATASET_HPP_
#define FVDET__KITTIO__DATASET_HPP_

#include <filesystem>
#include <memory>
#include <vector>

#include "fvdet/frustum/point_set.hpp"
#include "fvdet/kittio/config.hpp"
#include "fvdet/kittio/labels.hpp"
#include "fvdet/nnet/pgnet.hpp"
#include "fvdet/nnet/penet.hpp"
#include "fvdet/nnet/train.hpp"
#include "fvdet/proposal/anchors.hpp"
#include "fvdet/proposal/targets.hpp"

namespace fvdet::kittio
{

/// One scan with its labels (sensor frame).
struct Frame
{
  int sample = 0;
  PointCloud cloud;
  std::vector<LabeledObject> objects;
};

/// KITTI layout: <root>/velodyne/NNNNNN.bin, <root>/label_2/NNNNNN.txt and,
/// when present, <root>/calib/NNNNNN.txt.
std::filesystem::path velodyne_path(const std::filesystem::path & root, int sample);
std::filesystem::path label_path(const std::filesystem::path & root, int sample);
std::filesystem::path calib_path(const std::filesystem::path & root, int sample);

/// Sample ids with a velodyne file, ascending.
std::vector<int> list_samples(const std::filesystem::path & root);
/// Reads one frame; labels are optional (missing file -> no objects).
Frame load_frame(const std::filesystem::path & root, int sample);
std::vector<Frame> load_frames(const std::filesystem::path & root);
void save_frame(const std::filesystem::path & root, const Frame & frame);

/// Front-view map upscaled to the network size.
fvproj::FrontViewMap network_map(const PointCloud & cloud, const fvproj::ProjectionConfig & cfg,
                                 int threads = 1);

/// Stage-1 ground truth of the labelled Car / Pedestrian / Cyclist objects
/// whose map box center lies on the map.
std::vector<proposal::GroundTruthProposal> frame_proposals(const Frame & frame,
                                                           const fvproj::ProjectionConfig & cfg);

/// K-means anchors over the map box sizes of all frames, one scale per head.
std::vector<proposal::AnchorPrior> compute_anchors(const std::vector<Frame> & frames,
                                                   const PipelineConfig & cfg, std::uint64_t seed);

/// Checks that priors per scale agree with the network heads.
void check_priors(const std::vector<proposal::AnchorPrior> & priors, const nnet::PGNetConfig & net);

/// Precomputed input and targets of one frame.
struct PGSample
{
  nnet::Tensor input;
  std::vector<proposal::GroundTruthProposal> gts;
  proposal::TargetAssignment assignment;
  std::vector<proposal::Stage1Target> targets;
};

std::vector<proposal::GridSpec> network_grids(const PipelineConfig & cfg);

PGSample make_pg_sample(const Frame & frame, const std::vector<proposal::AnchorPrior> & priors,
                        const PipelineConfig & cfg);

/// Forward, stage-1 loss and (optionally) backward for one sample.
nnet::SampleLoss pg_sample_loss(nnet::PGNet & net, const PGSample & sample,
                                const PipelineConfig & cfg, bool backward = true);
std::vector<std::string> pg_component_names();

/// Objects usable for stage-2 training: labelled boxes whose unperturbed
/// fragment holds at least points.min_points points.
struct PEObject
{
  std::size_t frame = 0;
  std::size_t object = 0;
};

class PEDataset
{
public:
  PEDataset(const std::vector<Frame> & frames, const PipelineConfig & cfg);

  std::size_t size() const { return objects_.size(); }
  const std::vector<PEObject> & objects() const { return objects_; }

  /// Augmented, normalized point set and target box for one draw.
  struct Item
  {
    nnet::Tensor points;  // n x 3
    Box3D target;         // normalized canonical frame
  };
  Item make_item(std::size_t index, Rng & rng, bool augment = true) const;

private:
  const std::vector<Frame> * frames_;
  PipelineConfig cfg_;
  std::vector<frustum::ProjectedCloud> projected_;
  std::vector<PEObject> objects_;
};

nnet::SampleLoss pe_sample_loss(nnet::PENet & net, const PEDataset::Item & item,
                                const PipelineConfig & cfg, bool backward = true);

/// Sensor frame point set as an n x 3 tensor, subsampled with `rng` to
/// `max_points` when larger.
nnet::Tensor points_tensor(const frustum::ObjectPointSet & pts, std::size_t max_points, Rng & rng);

}  // namespace fvdet::kittio

#endif  // FVDET__KITTIO__DATASET_HPP_
