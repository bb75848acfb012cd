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


#ifndef FVDET__NNET__OPTIMIZER_HPP_
#define FVDET__NNET__OPTIMIZER_HPP_

#include <vector>

#include "fvdet/nnet/layers.hpp"

namespace fvdet::nnet
{

struct AdamConfig
{
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  /// Rescale the gradient when its global L2 norm exceeds this; 0 disables.
  double clip_norm = 0.0;
};

class Adam
{
public:
  explicit Adam(AdamConfig cfg = {}) : cfg_(cfg) {}

  /// Applies one update from the `grad` fields of `params`. The parameter
  /// list must be the same (order and shapes) on every call.
  void step(const std::vector<Param *> & params);

  const AdamConfig & config() const { return cfg_; }
  AdamConfig & config() { return cfg_; }
  long steps() const { return t_; }

private:
  AdamConfig cfg_;
  long t_ = 0;
  std::vector<std::vector<double>> m_;
  std::vector<std::vector<double>> v_;
};

void zero_grad(const std::vector<Param *> & params);
std::size_t parameter_count(const std::vector<Param *> & params);

}  // namespace fvdet::nnet

#endif  // FVDET__NNET__OPTIMIZER_HPP_
