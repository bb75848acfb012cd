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


#ifndef FVDET__KITTIO__PIPELINE_HPP_
#define FVDET__KITTIO__PIPELINE_HPP_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <vector>

#include "fvdet/eval/report.hpp"
#include "fvdet/kittio/dataset.hpp"
#include "fvdet/kittio/detector.hpp"

namespace fvdet::kittio
{

/// Scene `i` uses seed Rng::derive(seed, i) and becomes sample `i`.
std::vector<Frame> synth_frames(const PipelineConfig & cfg, int count, std::uint64_t seed);

using StepCallback = std::function<void(int, const nnet::LossTrace &)>;

struct PGTrainResult
{
  nnet::PGNet net;
  nnet::LossTrace trace;
};

/// Seeded initialisation followed by cfg.train_pgnet steps over `frames`.
PGTrainResult train_pgnet(const std::vector<Frame> & frames,
                          const std::vector<proposal::AnchorPrior> & priors,
                          const PipelineConfig & cfg, std::uint64_t seed, int threads,
                          const StepCallback & on_step = {});

struct PETrainResult
{
  nnet::PENet net;
  nnet::LossTrace trace;
};

PETrainResult train_penet(const std::vector<Frame> & frames, const PipelineConfig & cfg,
                          std::uint64_t seed, int threads, const StepCallback & on_step = {});

/// Model directory layout: config.json, anchors.txt, pgnet.bin, penet.bin
/// (each checkpoint with its .json sidecar).
std::filesystem::path model_config_path(const std::filesystem::path & dir);
std::filesystem::path model_anchors_path(const std::filesystem::path & dir);
std::filesystem::path model_pgnet_path(const std::filesystem::path & dir);
std::filesystem::path model_penet_path(const std::filesystem::path & dir);

nnet::PGNet load_pgnet(const std::filesystem::path & path, const PipelineConfig & cfg);
nnet::PENet load_penet(const std::filesystem::path & path, const PipelineConfig & cfg);

/// Ground truth of all frames.
std::vector<eval::GroundTruth> frames_ground_truth(const std::vector<Frame> & frames);

/// Every class x bucket x overlap kind, with the overlap threshold taken
/// from cfg.iou_car for Car and cfg.iou_person otherwise.
eval::Report pipeline_report(const std::vector<eval::Detection> & dets,
                             const std::vector<eval::GroundTruth> & gts, const PipelineConfig & cfg,
                             const std::vector<eval::Bucket> & buckets,
                             const std::vector<ClassId> & classes = {ClassId::kCar,
                                                                     ClassId::kPedestrian,
                                                                     ClassId::kCyclist,
                                                                     ClassId::kPerson});

/// Fraction of labelled objects of stage-1 class `cls` covered by a kept
/// proposal of that class with map-box IoU >= `iou`.
struct RecallCount
{
  std::size_t hit = 0;
  std::size_t total = 0;
  double recall() const { return total == 0 ? 0.0 : static_cast<double>(hit) / total; }
};

RecallCount proposal_recall(const std::vector<ClassProposal> & kept, const Frame & frame,
                            const PipelineConfig & cfg, ClassId cls, double iou);

}  // namespace fvdet::kittio

#endif  // FVDET__KITTIO__PIPELINE_HPP_
