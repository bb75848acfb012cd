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


#include "fvdet/kittio/pipeline.hpp"

#include <stdexcept>

#include "fvdet/eval/iou.hpp"
#include "fvdet/kittio/detector.hpp"
#include "fvdet/nnet/checkpoint.hpp"

namespace fvdet::kittio
{

std::vector<Frame> synth_frames(const PipelineConfig & cfg, int count, std::uint64_t seed)
{
  if (count < 0) {
    throw std::invalid_argument("synth_frames: negative count");
  }
  std::vector<Frame> frames;
  frames.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    SceneSpec spec = cfg.synth;
    spec.seed = Rng::derive(seed, static_cast<std::uint64_t>(i));
    Scene scene = gen_synthetic_scene(spec, cfg.projection);
    Frame f;
    f.sample = i;
    f.objects = scene_labels(scene, cfg.projection);
    f.cloud = std::move(scene.cloud);
    frames.push_back(std::move(f));
  }
  return frames;
}

PGTrainResult train_pgnet(const std::vector<Frame> & frames,
                          const std::vector<proposal::AnchorPrior> & priors,
                          const PipelineConfig & cfg, std::uint64_t seed, int threads,
                          const StepCallback & on_step)
{
  check_priors(priors, cfg.pgnet);
  std::vector<PGSample> samples;
  samples.reserve(frames.size());
  for (const auto & f : frames) samples.push_back(make_pg_sample(f, priors, cfg));
  PGTrainResult r{nnet::PGNet(cfg.pgnet), {}};
  Rng init(Rng::derive(seed, 0x96e7));
  r.net.init(init);
  nnet::TrainConfig tc{cfg.train_pgnet.steps, cfg.train_pgnet.batch_size, seed, threads,
                       cfg.train_pgnet.optimizer};
  r.trace = nnet::train(
    r.net, samples.size(),
    [&](nnet::PGNet & net, std::size_t idx, Rng &) {
      return pg_sample_loss(net, samples[idx], cfg, true);
    },
    tc, pg_component_names(), on_step);
  return r;
}

PETrainResult train_penet(const std::vector<Frame> & frames, const PipelineConfig & cfg,
                          std::uint64_t seed, int threads, const StepCallback & on_step)
{
  const PEDataset data(frames, cfg);
  if (data.size() == 0) {
    throw std::runtime_error("train-penet: no labelled object has enough points");
  }
  PETrainResult r{nnet::PENet(cfg.penet), {}};
  Rng init(Rng::derive(seed, 0x9e7e));
  r.net.init(init);
  nnet::TrainConfig tc{cfg.train_penet.steps, cfg.train_penet.batch_size, seed, threads,
                       cfg.train_penet.optimizer};
  r.trace = nnet::train(
    r.net, data.size(),
    [&](nnet::PENet & net, std::size_t idx, Rng & rng) {
      return pe_sample_loss(net, data.make_item(idx, rng, true), cfg, true);
    },
    tc, nnet::Stage2Loss::component_names(), on_step);
  return r;
}

std::filesystem::path model_config_path(const std::filesystem::path & dir)
{
  return dir / "config.json";
}

std::filesystem::path model_anchors_path(const std::filesystem::path & dir)
{
  return dir / "anchors.txt";
}

std::filesystem::path model_pgnet_path(const std::filesystem::path & dir)
{
  return dir / "pgnet.bin";
}

std::filesystem::path model_penet_path(const std::filesystem::path & dir)
{
  return dir / "penet.bin";
}

nnet::PGNet load_pgnet(const std::filesystem::path & path, const PipelineConfig & cfg)
{
  nnet::PGNet net(cfg.pgnet);
  nnet::load_checkpoint(net.params(), path);
  return net;
}

nnet::PENet load_penet(const std::filesystem::path & path, const PipelineConfig & cfg)
{
  nnet::PENet net(cfg.penet);
  nnet::load_checkpoint(net.params(), path);
  return net;
}

std::vector<eval::GroundTruth> frames_ground_truth(const std::vector<Frame> & frames)
{
  std::vector<eval::GroundTruth> gts;
  for (const auto & f : frames) {
    auto g = to_ground_truth(f.objects, f.sample);
    gts.insert(gts.end(), g.begin(), g.end());
  }
  return gts;
}

eval::Report pipeline_report(const std::vector<eval::Detection> & dets,
                             const std::vector<eval::GroundTruth> & gts, const PipelineConfig & cfg,
                             const std::vector<eval::Bucket> & buckets,
                             const std::vector<ClassId> & classes)
{
  eval::Report out;
  for (ClassId c : classes) {
    eval::ReportOptions o;
    o.classes = {c};
    o.buckets = buckets;
    o.iou_threshold = c == ClassId::kCar ? cfg.iou_car : cfg.iou_person;
    o.mode = cfg.ap_mode;
    auto r = eval::build_report(dets, gts, o);
    out.entries.insert(out.entries.end(), r.entries.begin(), r.entries.end());
  }
  return out;
}

RecallCount proposal_recall(const std::vector<ClassProposal> & kept, const Frame & frame,
                            const PipelineConfig & cfg, ClassId cls, double iou)
{
  RecallCount rc;
  for (const auto & g : frame_proposals(frame, cfg.projection)) {
    if (stage1_class(g.cls) != cls) continue;
    ++rc.total;
    for (const auto & k : kept) {
      if (k.cls != cls) continue;
      if (eval::iou_2d_map(k.proposal.map_box(), g.box) >= iou) {
        ++rc.hit;
        break;
      }
    }
  }
  return rc;
}

}  // namespace fvdet::kittio
