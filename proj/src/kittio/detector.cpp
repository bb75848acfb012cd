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


#include "fvdet/kittio/detector.hpp"

#include <algorithm>
#include <chrono>
#include <stdexcept>

#include "fvdet/frustum/fragment.hpp"
#include "fvdet/kittio/dataset.hpp"
#include "fvdet/nnet/stage2_loss.hpp"
#include "fvdet/proposal/nms.hpp"

namespace fvdet::kittio
{

namespace
{

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0)
{
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

}  // namespace

std::vector<proposal::Proposal3D> decode_heads(const std::vector<nnet::Tensor> & heads,
                                               const std::vector<proposal::GridSpec> & grids,
                                               const std::vector<proposal::AnchorPrior> & priors,
                                               double max_radius, int num_classes)
{
  if (heads.size() != grids.size()) {
    throw std::invalid_argument("decode_heads: one grid per head is required");
  }
  std::vector<proposal::Proposal3D> out;
  const int vpp = proposal::values_per_prior(num_classes);
  for (std::size_t h = 0; h < heads.size(); ++h) {
    const auto local = proposal::priors_for_scale(priors, static_cast<int>(h));
    const auto & g = grids[h];
    const auto np = static_cast<int>(local.size());
    if (heads[h].size() != static_cast<std::size_t>(g.cells()) * np * vpp) {
      throw std::invalid_argument("decode_heads: head size does not match grid and priors");
    }
    const double * d = heads[h].data();
    out.reserve(out.size() + static_cast<std::size_t>(g.cells() * np));
    for (int row = 0; row < g.rows; ++row) {
      for (int col = 0; col < g.cols; ++col) {
        for (int p = 0; p < np; ++p) {
          const double * v = d + ((static_cast<std::size_t>(row) * g.cols + col) * np + p) * vpp;
          proposal::RawPrediction raw{v[0], v[1], v[2], v[3], v[4], v[5], v[6],
                                      std::vector<double>(v + 7, v + vpp)};
          out.push_back(proposal::decode(raw, {col, row}, local[static_cast<std::size_t>(p)].second,
                                         max_radius, g.stride));
        }
      }
    }
  }
  return out;
}

std::vector<ClassProposal> select_proposals(const std::vector<proposal::Proposal3D> & all,
                                            const ProposalSettings & settings, int num_classes)
{
  std::vector<ClassProposal> out;
  for (int c = 0; c < num_classes; ++c) {
    std::vector<proposal::Proposal3D> cand;
    for (const auto & p : all) {
      const double s = p.confidence * p.class_scores[static_cast<std::size_t>(c)];
      if (s < settings.score_threshold) continue;
      cand.push_back(p);
      cand.back().confidence = s;
    }
    if (settings.max_candidates > 0 &&
        cand.size() > static_cast<std::size_t>(settings.max_candidates)) {
      std::stable_sort(cand.begin(), cand.end(), [](const auto & a, const auto & b) {
        return a.confidence > b.confidence;
      });
      cand.resize(static_cast<std::size_t>(settings.max_candidates));
    }
    for (auto & p : proposal::nms(cand, settings.nms_iou, settings.score_threshold)) {
      out.push_back({std::move(p), proposal::stage1_class_of_index(c)});
    }
  }
  return out;
}

Detector::Detector(PipelineConfig cfg, nnet::PGNet pgnet, nnet::PENet penet,
                   std::vector<proposal::AnchorPrior> priors)
: cfg_(std::move(cfg)), pgnet_(std::move(pgnet)), penet_(std::move(penet)), priors_(std::move(priors))
{
  check_priors(priors_, pgnet_.config());
  grids_ = network_grids(cfg_);
}

std::vector<ClassProposal> Detector::propose(const PointCloud & cloud, StageTimes * times)
{
  auto t0 = Clock::now();
  const auto map = network_map(cloud, cfg_.projection);
  const auto input =
    nnet::map_to_input(map, cfg_.projection.max_radius, cfg_.proposal.height_scale);
  if (times) times->projection_ms += ms_since(t0);
  t0 = Clock::now();
  const auto heads = pgnet_.forward(input);
  if (times) times->network_ms += ms_since(t0);
  t0 = Clock::now();
  const auto all = decode_heads(heads, grids_, priors_, cfg_.projection.max_radius,
                                cfg_.pgnet.num_classes);
  if (times) times->decode_ms += ms_since(t0);
  t0 = Clock::now();
  auto kept = select_proposals(all, cfg_.proposal, cfg_.pgnet.num_classes);
  if (times) times->nms_ms += ms_since(t0);
  return kept;
}

std::vector<eval::Detection> Detector::detect(const PointCloud & cloud, int sample,
                                              StageTimes * times)
{
  const auto proposals = propose(cloud, times);
  auto t0 = Clock::now();
  const auto projected = frustum::project_cloud(cloud, cfg_.projection);
  if (times) times->extrusion_ms += ms_since(t0);

  // Template indices used to split Person into Pedestrian / Cyclist.
  int ped = -1;
  int cyc = -1;
  for (std::size_t i = 0; i < cfg_.size_templates.size(); ++i) {
    if (cfg_.size_templates[i].cls == ClassId::kPedestrian && ped < 0) ped = static_cast<int>(i);
    if (cfg_.size_templates[i].cls == ClassId::kCyclist && cyc < 0) cyc = static_cast<int>(i);
  }

  std::vector<eval::Detection> out;
  for (std::size_t k = 0; k < proposals.size(); ++k) {
    const auto & cp = proposals[k];
    t0 = Clock::now();
    frustum::CylinderFragment frag;
    frustum::ObjectPointSet pts;
    try {
      frag = frustum::fragment_from_proposal(cp.proposal, cfg_.projection, cfg_.margins);
      pts = frustum::extrude_points(projected, frag, cfg_.projection);
    } catch (const std::exception &) {
      if (times) times->extrusion_ms += ms_since(t0);
      continue;
    }
    if (times) times->extrusion_ms += ms_since(t0);
    if (static_cast<int>(pts.points.size()) < std::max(cfg_.points.min_points, 1)) continue;

    t0 = Clock::now();
    double azimuth = 0.0;
    try {
      azimuth = frustum::fragment_azimuth(frag, cfg_.projection);
    } catch (const std::domain_error &) {
      continue;
    }
    const auto canon = frustum::to_canonical(pts, frag, cfg_.projection);
    const auto norm = frustum::normalize_centroid(canon);
    Rng rng(Rng::derive(static_cast<std::uint64_t>(sample), 0xde7ec7, k));
    const auto input =
      points_tensor(norm, static_cast<std::size_t>(cfg_.points.num_points), rng);
    const auto net_out = penet_.forward(input);
    const auto decoded = nnet::decode_box(net_out, cfg_.size_templates, cfg_.penet.heading_bins);
    Box3D box = decoded.box;
    box.cx += (*norm.centroid_offset)[0];
    box.cy += (*norm.centroid_offset)[1];
    box.cz += (*norm.centroid_offset)[2];
    box = frustum::box_from_canonical(box, azimuth);

    ClassId cls = ClassId::kCar;
    if (cp.cls != ClassId::kCar) {
      cls = ClassId::kPedestrian;
      if (ped >= 0 && cyc >= 0) {
        const double * scores = net_out.params.data() + cfg_.penet.size_score_offset();
        cls = scores[cyc] > scores[ped] ? ClassId::kCyclist : ClassId::kPedestrian;
      }
    }
    if (times) times->box_ms += ms_since(t0);
    if (!is_valid(box)) continue;
    out.push_back({box, cls, cp.proposal.confidence, sample, cp.proposal.map_box()});
  }
  return out;
}

}  // namespace fvdet::kittio
