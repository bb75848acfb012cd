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


#ifndef FVDET__PROPOSAL__TARGETS_HPP_
#define FVDET__PROPOSAL__TARGETS_HPP_

#include <vector>

#include "fvdet/core/geometry.hpp"
#include "fvdet/proposal/anchors.hpp"
#include "fvdet/proposal/box2d.hpp"
#include "fvdet/proposal/codec.hpp"

namespace fvdet::proposal
{

inline constexpr int kStage1Classes = 2;  // Car, Person

/// Car -> 0, everything else -> 1 (Person).
int stage1_class_index(ClassId id);
ClassId stage1_class_of_index(int index);

/// Ground truth expressed on the upscaled map plus its radial extent.
struct GroundTruthProposal
{
  MapBox box;
  double r1 = 0.0;
  double r2 = 0.0;
  ClassId cls = ClassId::kCar;
};

/// Per (scale, cell, prior) slot state: a ground-truth index for positives,
/// or one of the negative sentinels below.
class TargetAssignment
{
public:
  static constexpr int kNegative = -1;
  static constexpr int kIgnored = -2;

  struct Positive
  {
    int scale = 0;
    int row = 0;
    int col = 0;
    int local_prior = 0;  // channel group inside the head of `scale`
    int prior_index = 0;  // index into the full prior list
    int gt_index = 0;
  };

  TargetAssignment() = default;
  TargetAssignment(std::vector<GridSpec> grids, std::vector<int> priors_per_scale);

  int state(int scale, int row, int col, int prior) const;
  void set_state(int scale, int row, int col, int prior, int value);

  const std::vector<GridSpec> & grids() const { return grids_; }
  const std::vector<int> & priors_per_scale() const { return priors_per_scale_; }
  const std::vector<Positive> & positives() const { return positives_; }
  std::vector<Positive> & positives() { return positives_; }

  /// Slots in state `value`; any non-negative value counts every positive.
  std::size_t count(int value) const;
  std::size_t slot_count() const;

private:
  std::size_t slot(int scale, int row, int col, int prior) const;

  std::vector<GridSpec> grids_;
  std::vector<int> priors_per_scale_;
  std::vector<std::vector<int>> slots_;
  std::vector<Positive> positives_;
};

/// Each ground truth gets exactly one positive: the prior whose shape
/// (both centered at the origin) overlaps it most, at the cell containing
/// its center on that prior's scale. Ties go to the lower prior index; if
/// that slot is already taken by another ground truth the next best prior is
/// used. Any other anchor, placed at its cell center, whose IoU with a ground
/// truth exceeds `ignore_iou` is ignored. Throws std::invalid_argument for a
/// ground-truth center outside the map or when no free slot exists.
TargetAssignment assign_targets(const std::vector<GroundTruthProposal> & gts,
                                const std::vector<AnchorPrior> & priors,
                                const std::vector<GridSpec> & grids, double ignore_iou = 0.5);

/// Regression and classification targets of one positive slot.
struct Stage1Target
{
  TargetAssignment::Positive slot;
  double offset_x = 0.0;  // b_x - c_x, in [0, 1)
  double offset_y = 0.0;
  double tw = 0.0;        // log(b_w / p_w)
  double th = 0.0;
  double tr1 = 0.0;       // r1 / R
  double tr2 = 0.0;
  std::vector<double> class_targets;
};

std::vector<Stage1Target> build_targets(const TargetAssignment & assignment,
                                        const std::vector<GroundTruthProposal> & gts,
                                        const std::vector<AnchorPrior> & priors,
                                        double max_radius, int num_classes = kStage1Classes);

}  // namespace fvdet::proposal

#endif  // FVDET__PROPOSAL__TARGETS_HPP_
