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


#ifndef FVDET__NNET__STAGE2_LOSS_HPP_
#define FVDET__NNET__STAGE2_LOSS_HPP_

#include <array>
#include <string>
#include <vector>

#include "fvdet/core/geometry.hpp"
#include "fvdet/nnet/penet.hpp"

namespace fvdet::nnet
{

/// Mean object size of one final class, meters.
struct SizeTemplate
{
  ClassId cls = ClassId::kCar;
  double h = 1.0;
  double w = 1.0;
  double l = 1.0;
};

/// Car, Pedestrian, Cyclist means commonly observed on KITTI.
std::vector<SizeTemplate> default_size_templates();

/// Mean (h, w, l) per class over labelled boxes; classes without boxes keep
/// the default template.
std::vector<SizeTemplate> templates_from_boxes(const std::vector<std::pair<ClassId, Box3D>> & boxes);

/// Index of the template closest in squared (h, w, l) distance; ties to the
/// lower index.
int nearest_template(const Box3D & box, const std::vector<SizeTemplate> & templates);

struct Stage2Weights
{
  double center1 = 1.0;
  double center2 = 1.0;
  double size_cls = 1.0;
  double size_reg = 1.0;
  double heading_cls = 1.0;
  double heading_reg = 1.0;
  double corner = 1.0;
  double huber_delta = 1.0;
};

struct Stage2Loss
{
  double total = 0.0;
  double center1 = 0.0;
  double center2 = 0.0;
  double size_cls = 0.0;
  double size_reg = 0.0;
  double heading_cls = 0.0;
  double heading_reg = 0.0;
  double corner = 0.0;
  std::vector<double> grad_params;
  std::array<double, 3> grad_offset{};

  /// Component names in trace order.
  static std::vector<std::string> component_names();
  std::vector<double> components() const;
};

/// Heading bin of an angle in [0, 2pi) and its residual normalized to
/// [-1, 1) by half a bin width.
std::pair<int, double> heading_bin(double heading, int bins);
double heading_from_bin(int bin, double residual, int bins);

/// Full stage-2 objective against `gt` (normalized canonical frame).
Stage2Loss stage2_loss(const PENetOutput & out, const Box3D & gt,
                       const std::vector<SizeTemplate> & templates, int heading_bins,
                       const Stage2Weights & weights = {}, bool with_grad = true);

struct CornerLossGrad
{
  std::array<double, 3> center{};
  double h = 0.0;
  double w = 0.0;
  double l = 0.0;
  double heading = 0.0;
};

/// min over {gt, gt rotated by pi} of the mean over the eight corners of
/// huber(|pred corner - gt corner|).
double corner_loss(const Box3D & pred, const Box3D & gt, double delta = 1.0,
                   CornerLossGrad * grad = nullptr);

struct DecodedBox
{
  Box3D box;
  int size_class = 0;
  int heading_bin = 0;
  double size_score = 0.0;  // softmax probability of the chosen template
};

/// Box from the argmax template and heading bin, in the frame the network
/// saw (normalized canonical).
DecodedBox decode_box(const PENetOutput & out, const std::vector<SizeTemplate> & templates,
                      int heading_bins);

std::vector<double> log_softmax(const double * logits, std::size_t n);

}  // namespace fvdet::nnet

#endif  // FVDET__NNET__STAGE2_LOSS_HPP_
