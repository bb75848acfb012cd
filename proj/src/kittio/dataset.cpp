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


#include "fvdet/kittio/dataset.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

#include "fvdet/frustum/augment.hpp"
#include "fvdet/frustum/fragment.hpp"
#include "fvdet/kittio/velodyne.hpp"
#include "fvdet/nnet/stage2_loss.hpp"
#include "fvdet/proposal/loss.hpp"

namespace fvdet::kittio
{

namespace
{

std::string sample_name(int sample, const char * ext)
{
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%06d%s", sample, ext);
  return buf;
}

}  // namespace

std::filesystem::path velodyne_path(const std::filesystem::path & root, int sample)
{
  return root / "velodyne" / sample_name(sample, ".bin");
}

std::filesystem::path label_path(const std::filesystem::path & root, int sample)
{
  return root / "label_2" / sample_name(sample, ".txt");
}

std::filesystem::path calib_path(const std::filesystem::path & root, int sample)
{
  return root / "calib" / sample_name(sample, ".txt");
}

std::vector<int> list_samples(const std::filesystem::path & root)
{
  const auto dir = root / "velodyne";
  if (!std::filesystem::is_directory(dir)) {
    throw std::runtime_error(dir.string() + ": not a directory");
  }
  std::vector<int> out;
  for (const auto & e : std::filesystem::directory_iterator(dir)) {
    if (e.path().extension() != ".bin") continue;
    const std::string stem = e.path().stem().string();
    if (stem.empty() || stem.find_first_not_of("0123456789") != std::string::npos) continue;
    out.push_back(std::stoi(stem));
  }
  std::sort(out.begin(), out.end());
  return out;
}

Frame load_frame(const std::filesystem::path & root, int sample)
{
  Frame f;
  f.sample = sample;
  f.cloud = read_velodyne(velodyne_path(root, sample));
  const auto calib_file = calib_path(root, sample);
  const Calibration calib = std::filesystem::exists(calib_file) ? read_calibration(calib_file)
                                                                : Calibration::identity();
  if (std::filesystem::exists(label_path(root, sample))) {
    f.objects = read_labels(label_path(root, sample), calib);
  }
  return f;
}

std::vector<Frame> load_frames(const std::filesystem::path & root)
{
  std::vector<Frame> out;
  for (int s : list_samples(root)) out.push_back(load_frame(root, s));
  return out;
}

void save_frame(const std::filesystem::path & root, const Frame & frame)
{
  std::filesystem::create_directories(root / "velodyne");
  std::filesystem::create_directories(root / "label_2");
  write_velodyne(frame.cloud, velodyne_path(root, frame.sample));
  write_objects(frame.objects, label_path(root, frame.sample));
}

fvproj::FrontViewMap network_map(const PointCloud & cloud, const fvproj::ProjectionConfig & cfg,
                                 int threads)
{
  const auto base = fvproj::build_front_view_map(cloud, cfg, threads);
  return fvproj::upscale_nearest(base.map, cfg.upscaled_height, cfg.upscaled_width);
}

std::vector<proposal::GroundTruthProposal> frame_proposals(const Frame & frame,
                                                           const fvproj::ProjectionConfig & cfg)
{
  std::vector<proposal::GroundTruthProposal> out;
  for (const auto & o : frame.objects) {
    if (!o.cls || o.dont_care) continue;
    const auto gt = frustum::ground_truth_proposal(o.box, *o.cls, cfg);
    if (gt.box.cx < 0.0 || gt.box.cx >= cfg.upscaled_width || gt.box.cy < 0.0 ||
        gt.box.cy >= cfg.upscaled_height) {
      continue;
    }
    out.push_back(gt);
  }
  return out;
}

std::vector<proposal::AnchorPrior> compute_anchors(const std::vector<Frame> & frames,
                                                   const PipelineConfig & cfg, std::uint64_t seed)
{
  std::vector<proposal::BoxSize> sizes;
  for (const auto & f : frames) {
    for (const auto & g : frame_proposals(f, cfg.projection)) sizes.push_back({g.box.w, g.box.h});
  }
  auto priors = proposal::cluster_anchors(sizes, cfg.proposal.anchor_count, seed,
                                          static_cast<int>(cfg.pgnet.head_strides.size()));
  return priors;
}

void check_priors(const std::vector<proposal::AnchorPrior> & priors, const nnet::PGNetConfig & net)
{
  for (std::size_t h = 0; h < net.head_strides.size(); ++h) {
    const auto n = proposal::priors_for_scale(priors, static_cast<int>(h)).size();
    if (static_cast<int>(n) != net.priors_per_head[h]) {
      throw std::invalid_argument("anchors: scale " + std::to_string(h) + " has " +
                                  std::to_string(n) + " priors, the network head expects " +
                                  std::to_string(net.priors_per_head[h]));
    }
  }
}

std::vector<proposal::GridSpec> network_grids(const PipelineConfig & cfg)
{
  return proposal::make_grids(cfg.pgnet.head_strides, cfg.projection.upscaled_height,
                              cfg.projection.upscaled_width);
}

PGSample make_pg_sample(const Frame & frame, const std::vector<proposal::AnchorPrior> & priors,
                        const PipelineConfig & cfg)
{
  PGSample s;
  s.input = nnet::map_to_input(network_map(frame.cloud, cfg.projection),
                               cfg.projection.max_radius, cfg.proposal.height_scale);
  s.gts = frame_proposals(frame, cfg.projection);
  s.assignment = proposal::assign_targets(s.gts, priors, network_grids(cfg), cfg.proposal.ignore_iou);
  s.targets = proposal::build_targets(s.assignment, s.gts, priors, cfg.projection.max_radius,
                                      cfg.pgnet.num_classes);
  return s;
}

std::vector<std::string> pg_component_names()
{
  return {"coord", "conf", "cls", "reg"};
}

nnet::SampleLoss pg_sample_loss(nnet::PGNet & net, const PGSample & sample,
                                const PipelineConfig & cfg, bool backward)
{
  const auto heads = net.forward(sample.input);
  const auto grids = network_grids(cfg);
  std::vector<proposal::HeadView> views;
  for (std::size_t i = 0; i < heads.size(); ++i) {
    views.push_back({grids[i], cfg.pgnet.priors_per_head[i], cfg.pgnet.num_classes,
                     heads[i].values()});
  }
  const auto loss =
    proposal::stage1_loss(views, sample.assignment, sample.targets, cfg.proposal.loss, backward);
  if (backward) {
    std::vector<nnet::Tensor> grads;
    for (std::size_t i = 0; i < heads.size(); ++i) {
      grads.emplace_back(heads[i].shape(), loss.grads[i]);
    }
    net.backward(grads);
  }
  return {loss.total, {loss.coord, loss.conf, loss.cls, loss.reg}};
}

nnet::Tensor points_tensor(const frustum::ObjectPointSet & pts, std::size_t max_points, Rng & rng)
{
  const frustum::ObjectPointSet * src = &pts;
  frustum::ObjectPointSet sampled;
  if (max_points > 0 && pts.points.size() > max_points) {
    sampled = frustum::sample_points(pts, max_points, rng);
    src = &sampled;
  }
  nnet::Tensor t({src->points.size(), 3});
  for (std::size_t i = 0; i < src->points.size(); ++i) {
    t[3 * i] = src->points[i].x;
    t[3 * i + 1] = src->points[i].y;
    t[3 * i + 2] = src->points[i].z;
  }
  return t;
}

PEDataset::PEDataset(const std::vector<Frame> & frames, const PipelineConfig & cfg)
: frames_(&frames), cfg_(cfg)
{
  for (const auto & f : frames) projected_.push_back(frustum::project_cloud(f.cloud, cfg.projection));
  for (std::size_t fi = 0; fi < frames.size(); ++fi) {
    // Cached projections point at the caller's clouds.
    projected_[fi].cloud = &frames[fi].cloud;
    for (std::size_t oi = 0; oi < frames[fi].objects.size(); ++oi) {
      const auto & o = frames[fi].objects[oi];
      if (!o.cls || o.dont_care) continue;
      try {
        const auto frag = frustum::fragment_from_box(o.box, cfg.projection, cfg.margins);
        const auto pts = frustum::extrude_points(projected_[fi], frag, cfg.projection);
        if (static_cast<int>(pts.points.size()) >= std::max(cfg.points.min_points, 1)) {
          objects_.push_back({fi, oi});
        }
      } catch (const std::exception &) {
        // Boxes whose frustum leaves the map cannot be cropped; skip them.
      }
    }
  }
}

PEDataset::Item PEDataset::make_item(std::size_t index, Rng & rng, bool do_augment) const
{
  const PEObject & ref = objects_.at(index);
  const Box3D & gt = (*frames_)[ref.frame].objects[ref.object].box;
  const auto & projected = projected_[ref.frame];
  frustum::AugmentParams params;
  if (do_augment) params = frustum::sample_augment_params(rng, cfg_.augment);

  frustum::CylinderFragment frag;
  frustum::ObjectPointSet pts;
  bool ok = false;
  if (do_augment) {
    try {
      frag = frustum::fragment_from_box(frustum::perturb_box(gt, params), cfg_.projection,
                                        cfg_.margins);
      pts = frustum::extrude_points(projected, frag, cfg_.projection);
      ok = static_cast<int>(pts.points.size()) >= std::max(cfg_.points.min_points, 1);
    } catch (const std::exception &) {
      ok = false;
    }
  }
  if (!ok) {
    frag = frustum::fragment_from_box(gt, cfg_.projection, cfg_.margins);
    pts = frustum::extrude_points(projected, frag, cfg_.projection);
  }
  const auto canon = frustum::to_canonical(pts, frag, cfg_.projection);
  const Box3D gt_canon = frustum::box_to_canonical(gt, canon.canonical_rotation);
  frustum::AugmentParams geo = params;
  geo.center_jitter = {0.0, 0.0, 0.0};
  geo.size_scale = {1.0, 1.0, 1.0};
  const auto aug = frustum::augment(canon, gt_canon, geo);
  const auto norm = frustum::normalize_centroid(aug.points);
  Box3D target = aug.box;
  target.cx -= (*norm.centroid_offset)[0];
  target.cy -= (*norm.centroid_offset)[1];
  target.cz -= (*norm.centroid_offset)[2];
  return {points_tensor(norm, static_cast<std::size_t>(cfg_.points.num_points), rng), target};
}

nnet::SampleLoss pe_sample_loss(nnet::PENet & net, const PEDataset::Item & item,
                                const PipelineConfig & cfg, bool backward)
{
  const auto out = net.forward(item.points);
  const auto loss = nnet::stage2_loss(out, item.target, cfg.size_templates,
                                      cfg.penet.heading_bins, cfg.stage2, backward);
  if (backward) net.backward(loss.grad_params, loss.grad_offset);
  return {loss.total, loss.components()};
}

}  // namespace fvdet::kittio
