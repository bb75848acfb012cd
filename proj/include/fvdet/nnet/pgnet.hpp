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


#ifndef FVDET__NNET__PGNET_HPP_
#define FVDET__NNET__PGNET_HPP_

#include <vector>

#include "fvdet/core/rng.hpp"
#include "fvdet/fvproj/projection.hpp"
#include "fvdet/nnet/layers.hpp"
#include "fvdet/nnet/tensor.hpp"

namespace fvdet::nnet
{

/// Proposal network: stride-1 stem, four stride-2 residual stages and an
/// upsampling neck feeding one detection head per requested stride.
struct PGNetConfig
{
  int input_height = 128;
  int input_width = 512;
  int input_channels = 3;
  int stem_channels = 8;
  std::vector<int> widths{8, 16, 32, 64};
  std::vector<int> units{2, 4, 4, 2};
  /// Head strides, ascending; a subset of {4, 8, 16}.
  std::vector<int> head_strides{4, 8, 16};
  /// Priors emitted by each head, parallel to head_strides.
  std::vector<int> priors_per_head{3, 3, 3};
  int num_classes = 2;
  double slope = 0.1;
  /// Initial bias of the confidence channels, a prior towards background.
  double conf_bias_init = -4.0;

  /// Channels of the head at position i: priors * (7 + num_classes).
  int head_channels(std::size_t i) const;
  void validate() const;
};

/// Scales the map channels into network input: height / height_scale,
/// radial / R, intensity unchanged. Empty cells are zero.
Tensor map_to_input(const fvproj::FrontViewMap & map, double max_radius,
                    double height_scale = 3.0);

class PGNet
{
public:
  PGNet() = default;
  explicit PGNet(PGNetConfig cfg);

  const PGNetConfig & config() const { return cfg_; }

  void init(Rng & rng);
  /// One H/stride x W/stride x head_channels tensor per head, in
  /// head_strides order.
  std::vector<Tensor> forward(const Tensor & input);
  /// Takes one gradient per head; accumulates parameter gradients and
  /// returns d loss / d input.
  Tensor backward(const std::vector<Tensor> & head_grads);

  std::vector<Param *> params();

private:
  bool has_head(int stride) const;
  int head_position(int stride) const;

  PGNetConfig cfg_;
  Conv2d stem_;
  LeakyRelu stem_act_;
  std::vector<ResidualBlock> blocks_;

  // Stride-16 path.
  Conv2d neck16_;
  LeakyRelu neck16_act_;
  Conv2d head16_;
  // Stride-8 path.
  Conv2d lateral8_;
  LeakyRelu lateral8_act_;
  Upsample2x up8_;
  Conv2d neck8_;
  LeakyRelu neck8_act_;
  Conv2d head8_;
  // Stride-4 path.
  Conv2d lateral4_;
  LeakyRelu lateral4_act_;
  Upsample2x up4_;
  Conv2d neck4_;
  LeakyRelu neck4_act_;
  Conv2d head4_;

  int min_stride_ = 16;
  std::size_t lateral8_channels_ = 0;
  std::size_t lateral4_channels_ = 0;
};

}  // namespace fvdet::nnet

#endif  // FVDET__NNET__PGNET_HPP_
