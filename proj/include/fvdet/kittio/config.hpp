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


#ifndef FVDET__KITTIO__CONFIG_HPP_
#define FVDET__KITTIO__CONFIG_HPP_

#include <filesystem>
#include <optional>
#include <string>

#include "fvdet/eval/average_precision.hpp"
#include "fvdet/frustum/augment.hpp"
#include "fvdet/frustum/fragment.hpp"
#include "fvdet/fvproj/projection.hpp"
#include "fvdet/kittio/bev.hpp"
#include "fvdet/kittio/synthetic.hpp"
#include "fvdet/nnet/pgnet.hpp"
#include "fvdet/nnet/penet.hpp"
#include "fvdet/nnet/stage2_loss.hpp"
#include "fvdet/nnet/train.hpp"
#include "fvdet/proposal/loss.hpp"
#include "fvdet/proposal/nms.hpp"

namespace fvdet::kittio
{

/// Environment variable naming a config file; used when no --config flag
/// is given.
inline constexpr const char * kConfigEnv = "FVDET_CONFIG";

struct ProposalSettings
{
  int anchor_count = 9;
  int anchor_scales = 3;
  double ignore_iou = 0.5;
  double nms_iou = proposal::kDefaultNmsIou;
  double score_threshold = proposal::kDefaultScoreThreshold;
  /// Cap on proposals per class entering NMS, highest scores first.
  int max_candidates = 2000;
  proposal::LossWeights loss;
  /// Scale dividing the height channel at the network input, meters.
  double height_scale = 3.0;
};

struct StageTraining
{
  int steps = 2000;
  int batch_size = 2;
  nnet::AdamConfig optimizer;
};

struct PointSettings
{
  /// Points fed to the box network per object; larger sets are subsampled.
  int num_points = 128;
  /// Point sets smaller than this are dropped.
  int min_points = 3;
};

struct PipelineConfig
{
  fvproj::ProjectionConfig projection = fvproj::ProjectionConfig::kitti_default();
  ProposalSettings proposal;
  nnet::PGNetConfig pgnet;
  nnet::PENetConfig penet;
  std::vector<nnet::SizeTemplate> size_templates = nnet::default_size_templates();
  nnet::Stage2Weights stage2;
  frustum::FragmentMargins margins{1.0, 1.15};
  frustum::AugmentRanges augment;
  PointSettings points;
  StageTraining train_pgnet;
  StageTraining train_penet{2000, 16, {}};
  eval::ApMode ap_mode = eval::ApMode::k11Point;
  double iou_car = 0.7;
  double iou_person = 0.5;
  SceneSpec synth;
  BevConfig bev;
};

/// Every key, with its default value.
std::string config_to_json(const PipelineConfig & cfg);
/// Overlays the keys present in `text` on the defaults. Unknown keys and
/// type errors throw std::runtime_error naming the offending key.
PipelineConfig config_from_json(const std::string & text);
PipelineConfig load_config(const std::filesystem::path & path);

/// --config path, else $FVDET_CONFIG, else nullopt (built-in defaults).
std::optional<std::filesystem::path> resolve_config_path(const std::optional<std::string> & flag);

std::string read_text_file(const std::filesystem::path & path);

}  // namespace fvdet::kittio

#endif  // FVDET__KITTIO__CONFIG_HPP_
