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


#ifndef FVDET__NNET__PENET_HPP_
#define FVDET__NNET__PENET_HPP_

#include <array>
#include <vector>

#include "fvdet/core/rng.hpp"
#include "fvdet/nnet/layers.hpp"
#include "fvdet/nnet/tensor.hpp"

namespace fvdet::nnet
{

/// Box estimation network over one object point set.
///
/// Output layout, fixed:
///   [center residual x3 | size scores xN_S | size residuals x3N_S |
///    heading scores xN_H | heading residuals xN_H]
struct PENetConfig
{
  std::vector<int> point_mlp{64, 128, 256};
  std::vector<int> fc{256, 128};
  std::vector<int> tnet_mlp{64, 128};
  int size_templates = 3;
  int heading_bins = 12;
  double slope = 0.1;

  int output_dim() const { return 3 + 4 * size_templates + 2 * heading_bins; }
  int size_score_offset() const { return 3; }
  int size_residual_offset() const { return 3 + size_templates; }
  int heading_score_offset() const { return 3 + 4 * size_templates; }
  int heading_residual_offset() const { return 3 + 4 * size_templates + heading_bins; }
  void validate() const;
};

struct PENetOutput
{
  std::vector<double> params;      // output_dim values
  std::array<double, 3> offset{};  // T-Net center estimate
};

class PENet
{
public:
  PENet() = default;
  explicit PENet(PENetConfig cfg);

  const PENetConfig & config() const { return cfg_; }

  void init(Rng & rng);
  /// `points` is n x 3 (x, y, z). Throws std::invalid_argument for n = 0.
  PENetOutput forward(const Tensor & points);
  /// Accumulates parameter gradients; returns d loss / d points.
  Tensor backward(const std::vector<double> & grad_params, const std::array<double, 3> & grad_offset);

  std::vector<Param *> params();

private:
  struct Stack
  {
    std::vector<Dense> layers;
    std::vector<LeakyRelu> acts;

    Tensor forward(const Tensor & x);
    Tensor backward(const Tensor & g);
  };

  PENetConfig cfg_;
  Stack tnet_points_;
  MaxPoolRows tnet_pool_;
  Dense tnet_out_;
  Stack point_mlp_;
  MaxPoolRows pool_;
  Stack fc_;
  Dense out_;
  std::size_t rows_ = 0;
};

}  // namespace fvdet::nnet

#endif  // FVDET__NNET__PENET_HPP_
