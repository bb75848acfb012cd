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


#ifndef FVDET__NNET__LAYERS_HPP_
#define FVDET__NNET__LAYERS_HPP_

#include <string>
#include <vector>

#include "fvdet/core/rng.hpp"
#include "fvdet/nnet/tensor.hpp"

namespace fvdet::nnet
{

/// Trainable tensor with its accumulated gradient.
struct Param
{
  std::string name;
  Tensor value;
  Tensor grad;
};

/// He-style uniform fan-in initialisation: U(-sqrt(6 / fan_in), +sqrt(6 / fan_in)).
void init_uniform_fan_in(Param & p, std::size_t fan_in, Rng & rng, double gain = 1.0);

/// 2D cross-correlation on HWC tensors with TensorFlow-style SAME zero
/// padding; output is ceil(H / stride) x ceil(W / stride) x out_channels.
/// Weights are laid out (k, k, in, out).
class Conv2d
{
public:
  Conv2d() = default;
  Conv2d(std::string name, int in_channels, int out_channels, int kernel, int stride);

  Tensor forward(const Tensor & input);
  /// Accumulates weight and bias gradients; returns d loss / d input.
  Tensor backward(const Tensor & grad_output);

  void init(Rng & rng, double gain = 1.0);
  std::vector<Param *> params() { return {&weight, &bias}; }

  int in_channels() const { return in_; }
  int out_channels() const { return out_; }
  int kernel() const { return k_; }
  int stride() const { return stride_; }

  Param weight;
  Param bias;

private:
  int in_ = 0;
  int out_ = 0;
  int k_ = 1;
  int stride_ = 1;
  std::vector<std::size_t> input_shape_;
  int out_h_ = 0;
  int out_w_ = 0;
  int pad_top_ = 0;
  int pad_left_ = 0;
  Tensor cols_;  // im2col matrix, or the input itself for pointwise convs
};

/// max(x, slope * x) elementwise.
class LeakyRelu
{
public:
  explicit LeakyRelu(double slope = 0.1) : slope_(slope) {}

  Tensor forward(const Tensor & input);
  Tensor backward(const Tensor & grad_output) const;
  double slope() const { return slope_; }

private:
  double slope_;
  Tensor input_;
};

/// Nearest-neighbour 2x upsampling of HWC tensors. Backward sums each 2x2
/// block of the incoming gradient.
class Upsample2x
{
public:
  Tensor forward(const Tensor & input);
  Tensor backward(const Tensor & grad_output) const;

private:
  std::vector<std::size_t> input_shape_;
};

/// Fully connected layer applied row-wise to an (n, in) tensor; with n
/// points this is the shared per-point MLP layer.
class Dense
{
public:
  Dense() = default;
  Dense(std::string name, int in_features, int out_features);

  Tensor forward(const Tensor & input);
  Tensor backward(const Tensor & grad_output);

  void init(Rng & rng, double gain = 1.0);
  std::vector<Param *> params() { return {&weight, &bias}; }

  Param weight;  // (in, out)
  Param bias;    // (out)

private:
  int in_ = 0;
  int out_ = 0;
  Tensor input_;
};

/// Column-wise max over the rows of an (n, C) tensor -> (1, C). Ties resolve
/// to the first row.
class MaxPoolRows
{
public:
  Tensor forward(const Tensor & input);
  Tensor backward(const Tensor & grad_output) const;

private:
  std::size_t rows_ = 0;
  std::vector<std::size_t> argmax_;
};

/// Channel concatenation of two HWC tensors with equal spatial size.
Tensor concat_channels(const Tensor & a, const Tensor & b);
/// Splits an HWC gradient back into the first `channels_a` channels and the rest.
std::pair<Tensor, Tensor> split_channels(const Tensor & grad, std::size_t channels_a);

/// Entry convolution with stride 2 followed by `units` skip units, each
/// computing x + act(conv3x3(act(conv1x1(x)))).
class ResidualBlock
{
public:
  ResidualBlock() = default;
  ResidualBlock(const std::string & name, int in_channels, int out_channels, int units,
                int mid_channels, double slope);

  Tensor forward(const Tensor & input);
  Tensor backward(const Tensor & grad_output);

  void init(Rng & rng);
  std::vector<Param *> params();

  struct Unit
  {
    Conv2d reduce;
    LeakyRelu reduce_act;
    Conv2d expand;
    LeakyRelu expand_act;
  };

  Conv2d entry;
  LeakyRelu entry_act;
  std::vector<Unit> units;
};

}  // namespace fvdet::nnet

#endif  // FVDET__NNET__LAYERS_HPP_
