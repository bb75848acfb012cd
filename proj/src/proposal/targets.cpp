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


#include "fvdet/proposal/targets.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace fvdet::proposal
{

int stage1_class_index(ClassId id)
{
  return id == ClassId::kCar ? 0 : 1;
}

ClassId stage1_class_of_index(int index)
{
  return index == 0 ? ClassId::kCar : ClassId::kPerson;
}

TargetAssignment::TargetAssignment(std::vector<GridSpec> grids, std::vector<int> priors_per_scale)
: grids_(std::move(grids)), priors_per_scale_(std::move(priors_per_scale))
{
  if (grids_.size() != priors_per_scale_.size()) {
    throw std::invalid_argument("TargetAssignment: one prior count per grid required");
  }
  for (std::size_t s = 0; s < grids_.size(); ++s) {
    slots_.emplace_back(
      static_cast<std::size_t>(grids_[s].cells()) * static_cast<std::size_t>(priors_per_scale_[s]),
      kNegative);
  }
}

std::size_t TargetAssignment::slot(int scale, int row, int col, int prior) const
{
  const auto & g = grids_[static_cast<std::size_t>(scale)];
  return (static_cast<std::size_t>(row) * g.cols + col) *
           static_cast<std::size_t>(priors_per_scale_[static_cast<std::size_t>(scale)]) +
         prior;
}

int TargetAssignment::state(int scale, int row, int col, int prior) const
{
  return slots_[static_cast<std::size_t>(scale)][slot(scale, row, col, prior)];
}

void TargetAssignment::set_state(int scale, int row, int col, int prior, int value)
{
  slots_[static_cast<std::size_t>(scale)][slot(scale, row, col, prior)] = value;
}

std::size_t TargetAssignment::count(int value) const
{
  std::size_t n = 0;
  for (const auto & s : slots_) {
    if (value >= 0) {
      n += static_cast<std::size_t>(std::count_if(s.begin(), s.end(), [](int v) { return v >= 0; }));
    } else {
      n += static_cast<std::size_t>(std::count(s.begin(), s.end(), value));
    }
  }
  return n;
}

std::size_t TargetAssignment::slot_count() const
{
  std::size_t n = 0;
  for (const auto & s : slots_) {
    n += s.size();
  }
  return n;
}

TargetAssignment assign_targets(const std::vector<GroundTruthProposal> & gts,
                                const std::vector<AnchorPrior> & priors,
                                const std::vector<GridSpec> & grids, double ignore_iou)
{
  // Local (per-scale) index of every prior.
  std::vector<int> per_scale(grids.size(), 0);
  std::vector<int> local(priors.size(), 0);
  for (std::size_t i = 0; i < priors.size(); ++i) {
    const int s = priors[i].scale_index;
    if (s < 0 || s >= static_cast<int>(grids.size())) {
      throw std::invalid_argument("assign_targets: prior scale index out of range");
    }
    local[i] = per_scale[static_cast<std::size_t>(s)]++;
  }
  TargetAssignment out(grids, per_scale);

  for (std::size_t g = 0; g < gts.size(); ++g) {
    const MapBox & box = gts[g].box;
    for (const auto & grid : grids) {
      if (!(box.cx >= 0.0 && box.cx < grid.cols * grid.stride && box.cy >= 0.0 &&
            box.cy < grid.rows * grid.stride)) {
        throw std::invalid_argument("assign_targets: ground truth " + std::to_string(g) +
                                    " lies outside the map");
      }
    }
    if (!(box.w > 0.0) || !(box.h > 0.0)) {
      throw std::invalid_argument("assign_targets: ground-truth sizes must be positive");
    }
  }

  // Ignored slots first so positives can override them.
  for (const auto & gt : gts) {
    for (std::size_t p = 0; p < priors.size(); ++p) {
      const int s = priors[p].scale_index;
      const GridSpec & grid = grids[static_cast<std::size_t>(s)];
      const double reach_x = 0.5 * (gt.box.w + priors[p].width);
      const double reach_y = 0.5 * (gt.box.h + priors[p].height);
      const int c0 = std::max(0, static_cast<int>(std::floor((gt.box.cx - reach_x) / grid.stride)));
      const int c1 = std::min(grid.cols - 1,
                              static_cast<int>(std::floor((gt.box.cx + reach_x) / grid.stride)));
      const int r0 = std::max(0, static_cast<int>(std::floor((gt.box.cy - reach_y) / grid.stride)));
      const int r1 = std::min(grid.rows - 1,
                              static_cast<int>(std::floor((gt.box.cy + reach_y) / grid.stride)));
      for (int r = r0; r <= r1; ++r) {
        for (int c = c0; c <= c1; ++c) {
          const MapBox anchor{(c + 0.5) * grid.stride, (r + 0.5) * grid.stride, priors[p].width,
                              priors[p].height};
          if (iou_2d_axis_aligned(anchor, gt.box) > ignore_iou) {
            out.set_state(s, r, c, local[p], TargetAssignment::kIgnored);
          }
        }
      }
    }
  }

  for (std::size_t g = 0; g < gts.size(); ++g) {
    const MapBox & box = gts[g].box;
    std::vector<double> shape_iou(priors.size());
    for (std::size_t p = 0; p < priors.size(); ++p) {
      shape_iou[p] = iou_2d_axis_aligned({0.0, 0.0, box.w, box.h},
                                         {0.0, 0.0, priors[p].width, priors[p].height});
    }
    std::vector<std::size_t> order(priors.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return shape_iou[a] > shape_iou[b]; });

    bool placed = false;
    for (std::size_t p : order) {
      const int s = priors[p].scale_index;
      const GridSpec & grid = grids[static_cast<std::size_t>(s)];
      const int col = static_cast<int>(std::floor(box.cx / grid.stride));
      const int row = static_cast<int>(std::floor(box.cy / grid.stride));
      if (out.state(s, row, col, local[p]) >= 0) {
        continue;
      }
      out.set_state(s, row, col, local[p], static_cast<int>(g));
      out.positives().push_back({s, row, col, local[p], static_cast<int>(p), static_cast<int>(g)});
      placed = true;
      break;
    }
    if (!placed) {
      throw std::invalid_argument("assign_targets: no free prior slot for ground truth " +
                                  std::to_string(g));
    }
  }
  return out;
}

std::vector<Stage1Target> build_targets(const TargetAssignment & assignment,
                                        const std::vector<GroundTruthProposal> & gts,
                                        const std::vector<AnchorPrior> & priors,
                                        double max_radius, int num_classes)
{
  std::vector<Stage1Target> targets;
  targets.reserve(assignment.positives().size());
  for (const auto & pos : assignment.positives()) {
    const GroundTruthProposal & gt = gts[static_cast<std::size_t>(pos.gt_index)];
    const AnchorPrior & prior = priors[static_cast<std::size_t>(pos.prior_index)];
    const double stride = assignment.grids()[static_cast<std::size_t>(pos.scale)].stride;
    Stage1Target t;
    t.slot = pos;
    t.offset_x = gt.box.cx / stride - pos.col;
    t.offset_y = gt.box.cy / stride - pos.row;
    t.tw = std::log(gt.box.w / prior.width);
    t.th = std::log(gt.box.h / prior.height);
    t.tr1 = gt.r1 / max_radius;
    t.tr2 = gt.r2 / max_radius;
    t.class_targets.assign(static_cast<std::size_t>(num_classes), 0.0);
    const int ci = stage1_class_index(gt.cls);
    if (ci < num_classes) {
      t.class_targets[static_cast<std::size_t>(ci)] = 1.0;
    }
    targets.push_back(std::move(t));
  }
  return targets;
}

}  // namespace fvdet::proposal
