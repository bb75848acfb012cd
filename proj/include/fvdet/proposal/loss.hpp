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


#ifndef FVDET__PROPOSAL__LOSS_HPP_
#define FVDET__PROPOSAL__LOSS_HPP_

#include <span>
#include <string>
#include <vector>

#include "fvdet/proposal/codec.hpp"
#include "fvdet/proposal/targets.hpp"

namespace fvdet::proposal
{

struct LossWeights
{
  double coord = 1.0;
  double conf = 1.0;
  double cls = 1.0;
  double reg = 1.0;
  double huber_delta = 1.0;
};

/// Probabilities are clamped to [kProbClamp, 1 - kProbClamp] before the log.
inline constexpr double kProbClamp = 1e-7;

/// Mean binary cross entropy. Throws std::invalid_argument on length mismatch.
double bce(std::span<const double> p, std::span<const double> y);

/// Quadratic below delta, linear above, C1 at |x| = delta.
double huber(double x, double delta);
double huber_grad(double x, double delta);

/// Read-only view of one head output laid out as rows x cols x
/// (priors * (7 + num_classes)), channel-fastest.
struct HeadView
{
  GridSpec grid;
  int priors = 0;
  int num_classes = kStage1Classes;
  std::span<const double> data;

  std::size_t index(int row, int col, int prior, int field) const
  {
    return ((static_cast<std::size_t>(row) * grid.cols + col) * priors + prior) *
             static_cast<std::size_t>(values_per_prior(num_classes)) +
           field;
  }
  double at(int row, int col, int prior, int field) const { return data[index(row, col, prior, field)]; }
  RawPrediction raw(int row, int col, int prior) const;
};

struct Stage1Loss
{
  double total = 0.0;
  double coord = 0.0;
  double conf = 0.0;
  double cls = 0.0;
  double reg = 0.0;
  /// d total / d head value, one buffer per head (empty when not requested).
  std::vector<std::vector<double>> grads;
};

/// Weighted sum of BCE on the sigmoid center offsets (positives), BCE on the
/// confidence (positives and negatives, never ignored slots), BCE on the
/// class scores (positives) and Huber on (t_w, t_h, t_r1, t_r2) of the
/// positives, summed over fields and averaged over positives.
Stage1Loss stage1_loss(std::span<const HeadView> heads, const TargetAssignment & assignment,
                       const std::vector<Stage1Target> & targets, const LossWeights & weights,
                       bool with_grad = true);

/// {"coord": .., "conf": .., "cls": .., "reg": .., "total": ..}
std::string loss_components_json(const Stage1Loss & loss);

}  // namespace fvdet::proposal

#endif  // FVDET__PROPOSAL__LOSS_HPP_
