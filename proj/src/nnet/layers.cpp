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


#include "fvdet/nnet/layers.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>

namespace fvdet::nnet
{

namespace
{

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MapMat = Eigen::Map<RowMat>;
using ConstMapMat = Eigen::Map<const RowMat>;

MapMat as_matrix(Tensor & t, std::size_t rows, std::size_t cols)
{
  return MapMat(t.data(), static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
}

ConstMapMat as_matrix(const Tensor & t, std::size_t rows, std::size_t cols)
{
  return ConstMapMat(t.data(), static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
}

/// Adds the column sums of a rows x cols buffer to `out`, row by row. Eigen's
/// vectorized reductions peel by address, which would make the summation
/// order (and the last bits) depend on where the buffer was allocated.
void add_column_sums(const Tensor & t, std::size_t rows, std::size_t cols, Tensor & out)
{
  const double * src = t.data();
  double * dst = out.data();
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) dst[c] += src[r * cols + c];
  }
}

void require_rank(const Tensor & t, std::size_t rank, const char * who)
{
  if (t.rank() != rank) {
    throw std::invalid_argument(std::string(who) + ": expected rank " + std::to_string(rank) +
                                " input, got " + t.shape_string());
  }
}

}  // namespace

void init_uniform_fan_in(Param & p, std::size_t fan_in, Rng & rng, double gain)
{
  const double bound = gain * std::sqrt(6.0 / static_cast<double>(std::max<std::size_t>(fan_in, 1)));
  for (double & v : p.value.values()) {
    v = rng.uniform(-bound, bound);
  }
}

// ---------------------------------------------------------------------------
// Conv2d

Conv2d::Conv2d(std::string name, int in_channels, int out_channels, int kernel, int stride)
: in_(in_channels), out_(out_channels), k_(kernel), stride_(stride)
{
  if (in_channels <= 0 || out_channels <= 0 || kernel <= 0 || (stride != 1 && stride != 2)) {
    throw std::invalid_argument("Conv2d " + name + ": invalid geometry");
  }
  const auto k = static_cast<std::size_t>(kernel);
  weight = {name + ".weight",
            Tensor({k, k, static_cast<std::size_t>(in_), static_cast<std::size_t>(out_)}),
            Tensor({k, k, static_cast<std::size_t>(in_), static_cast<std::size_t>(out_)})};
  bias = {name + ".bias", Tensor({static_cast<std::size_t>(out_)}),
          Tensor({static_cast<std::size_t>(out_)})};
}

void Conv2d::init(Rng & rng, double gain)
{
  init_uniform_fan_in(weight, static_cast<std::size_t>(k_ * k_ * in_), rng, gain);
  bias.value.fill(0.0);
}

Tensor Conv2d::forward(const Tensor & input)
{
  require_rank(input, 3, "Conv2d");
  if (static_cast<int>(input.dim(2)) != in_) {
    throw std::invalid_argument("Conv2d " + weight.name + ": expected " + std::to_string(in_) +
                                " input channels, got " + input.shape_string());
  }
  const int h = static_cast<int>(input.dim(0));
  const int w = static_cast<int>(input.dim(1));
  input_shape_ = input.shape();
  out_h_ = (h + stride_ - 1) / stride_;
  out_w_ = (w + stride_ - 1) / stride_;
  const int pad_h = std::max((out_h_ - 1) * stride_ + k_ - h, 0);
  const int pad_w = std::max((out_w_ - 1) * stride_ + k_ - w, 0);
  pad_top_ = pad_h / 2;
  pad_left_ = pad_w / 2;

  const std::size_t pixels = static_cast<std::size_t>(out_h_) * out_w_;
  const std::size_t patch = static_cast<std::size_t>(k_) * k_ * in_;

  if (k_ == 1 && stride_ == 1) {
    cols_ = input;
  } else {
    cols_ = Tensor({pixels, patch});
    double * dst = cols_.data();
    const double * src = input.data();
    for (int oy = 0; oy < out_h_; ++oy) {
      for (int ox = 0; ox < out_w_; ++ox) {
        for (int ky = 0; ky < k_; ++ky) {
          const int iy = oy * stride_ - pad_top_ + ky;
          for (int kx = 0; kx < k_; ++kx) {
            const int ix = ox * stride_ - pad_left_ + kx;
            if (iy < 0 || iy >= h || ix < 0 || ix >= w) {
              std::fill(dst, dst + in_, 0.0);
            } else {
              std::memcpy(dst, src + (static_cast<std::size_t>(iy) * w + ix) * in_,
                          sizeof(double) * static_cast<std::size_t>(in_));
            }
            dst += in_;
          }
        }
      }
    }
  }

  Tensor out({static_cast<std::size_t>(out_h_), static_cast<std::size_t>(out_w_),
              static_cast<std::size_t>(out_)});
  auto o = as_matrix(out, pixels, static_cast<std::size_t>(out_));
  const auto c = as_matrix(static_cast<const Tensor &>(cols_), pixels, patch);
  const auto wm = as_matrix(static_cast<const Tensor &>(weight.value), patch,
                            static_cast<std::size_t>(out_));
  o.noalias() = c * wm;
  const Eigen::Map<const Eigen::RowVectorXd> b(bias.value.data(), out_);
  o.rowwise() += b;
  check_finite(out, "Conv2d::forward");
  return out;
}

Tensor Conv2d::backward(const Tensor & grad_output)
{
  const std::size_t pixels = static_cast<std::size_t>(out_h_) * out_w_;
  const std::size_t patch = static_cast<std::size_t>(k_) * k_ * in_;
  if (grad_output.size() != pixels * static_cast<std::size_t>(out_)) {
    throw std::invalid_argument("Conv2d::backward: gradient shape mismatch");
  }
  const auto go = as_matrix(grad_output, pixels, static_cast<std::size_t>(out_));
  const auto c = as_matrix(static_cast<const Tensor &>(cols_), pixels, patch);

  auto gw = as_matrix(weight.grad, patch, static_cast<std::size_t>(out_));
  gw.noalias() += c.transpose() * go;
  add_column_sums(grad_output, pixels, static_cast<std::size_t>(out_), bias.grad);

  const auto wm = as_matrix(static_cast<const Tensor &>(weight.value), patch,
                            static_cast<std::size_t>(out_));
  Tensor grad_input(input_shape_);
  if (k_ == 1 && stride_ == 1) {
    auto gi = as_matrix(grad_input, pixels, static_cast<std::size_t>(in_));
    gi.noalias() = go * wm.transpose();
    return grad_input;
  }

  Tensor gcols({pixels, patch});
  auto gc = as_matrix(gcols, pixels, patch);
  gc.noalias() = go * wm.transpose();

  const int h = static_cast<int>(input_shape_[0]);
  const int w = static_cast<int>(input_shape_[1]);
  const double * src = gcols.data();
  double * dst = grad_input.data();
  for (int oy = 0; oy < out_h_; ++oy) {
    for (int ox = 0; ox < out_w_; ++ox) {
      for (int ky = 0; ky < k_; ++ky) {
        const int iy = oy * stride_ - pad_top_ + ky;
        for (int kx = 0; kx < k_; ++kx) {
          const int ix = ox * stride_ - pad_left_ + kx;
          if (iy >= 0 && iy < h && ix >= 0 && ix < w) {
            double * d = dst + (static_cast<std::size_t>(iy) * w + ix) * in_;
            for (int ci = 0; ci < in_; ++ci) {
              d[ci] += src[ci];
            }
          }
          src += in_;
        }
      }
    }
  }
  return grad_input;
}

// ---------------------------------------------------------------------------
// LeakyRelu

Tensor LeakyRelu::forward(const Tensor & input)
{
  input_ = input;
  Tensor out = input;
  for (double & v : out.values()) {
    if (v < 0.0) v *= slope_;
  }
  return out;
}

Tensor LeakyRelu::backward(const Tensor & grad_output) const
{
  if (!grad_output.same_shape(input_)) {
    throw std::invalid_argument("LeakyRelu::backward: gradient shape mismatch");
  }
  Tensor g = grad_output;
  const double * x = input_.data();
  double * d = g.data();
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (x[i] < 0.0) d[i] *= slope_;
  }
  return g;
}

// ---------------------------------------------------------------------------
// Upsample2x

Tensor Upsample2x::forward(const Tensor & input)
{
  require_rank(input, 3, "Upsample2x");
  input_shape_ = input.shape();
  const std::size_t h = input.dim(0);
  const std::size_t w = input.dim(1);
  const std::size_t c = input.dim(2);
  Tensor out({2 * h, 2 * w, c});
  for (std::size_t y = 0; y < 2 * h; ++y) {
    for (std::size_t x = 0; x < 2 * w; ++x) {
      std::memcpy(out.data() + (y * 2 * w + x) * c, input.data() + ((y / 2) * w + x / 2) * c,
                  sizeof(double) * c);
    }
  }
  return out;
}

Tensor Upsample2x::backward(const Tensor & grad_output) const
{
  Tensor g(input_shape_);
  const std::size_t h = input_shape_[0];
  const std::size_t w = input_shape_[1];
  const std::size_t c = input_shape_[2];
  if (grad_output.rank() != 3 || grad_output.dim(0) != 2 * h || grad_output.dim(1) != 2 * w ||
      grad_output.dim(2) != c) {
    throw std::invalid_argument("Upsample2x::backward: gradient shape mismatch");
  }
  for (std::size_t y = 0; y < 2 * h; ++y) {
    for (std::size_t x = 0; x < 2 * w; ++x) {
      double * d = &g.at(y / 2, x / 2, 0);
      const double * s = grad_output.data() + (y * 2 * w + x) * c;
      for (std::size_t k = 0; k < c; ++k) {
        d[k] += s[k];
      }
    }
  }
  return g;
}

// ---------------------------------------------------------------------------
// Dense

Dense::Dense(std::string name, int in_features, int out_features)
: in_(in_features), out_(out_features)
{
  if (in_features <= 0 || out_features <= 0) {
    throw std::invalid_argument("Dense " + name + ": invalid geometry");
  }
  const auto i = static_cast<std::size_t>(in_);
  const auto o = static_cast<std::size_t>(out_);
  weight = {name + ".weight", Tensor({i, o}), Tensor({i, o})};
  bias = {name + ".bias", Tensor({o}), Tensor({o})};
}

void Dense::init(Rng & rng, double gain)
{
  init_uniform_fan_in(weight, static_cast<std::size_t>(in_), rng, gain);
  bias.value.fill(0.0);
}

Tensor Dense::forward(const Tensor & input)
{
  require_rank(input, 2, "Dense");
  if (static_cast<int>(input.dim(1)) != in_) {
    throw std::invalid_argument("Dense " + weight.name + ": expected " + std::to_string(in_) +
                                " features, got " + input.shape_string());
  }
  input_ = input;
  const std::size_t n = input.dim(0);
  Tensor out({n, static_cast<std::size_t>(out_)});
  auto o = as_matrix(out, n, static_cast<std::size_t>(out_));
  o.noalias() = as_matrix(input, n, static_cast<std::size_t>(in_)) *
                as_matrix(static_cast<const Tensor &>(weight.value), static_cast<std::size_t>(in_),
                          static_cast<std::size_t>(out_));
  const Eigen::Map<const Eigen::RowVectorXd> b(bias.value.data(), out_);
  o.rowwise() += b;
  check_finite(out, "Dense::forward");
  return out;
}

Tensor Dense::backward(const Tensor & grad_output)
{
  const std::size_t n = input_.dim(0);
  if (grad_output.size() != n * static_cast<std::size_t>(out_)) {
    throw std::invalid_argument("Dense::backward: gradient shape mismatch");
  }
  const auto go = as_matrix(grad_output, n, static_cast<std::size_t>(out_));
  const auto x = as_matrix(static_cast<const Tensor &>(input_), n, static_cast<std::size_t>(in_));
  auto gw = as_matrix(weight.grad, static_cast<std::size_t>(in_), static_cast<std::size_t>(out_));
  gw.noalias() += x.transpose() * go;
  add_column_sums(grad_output, n, static_cast<std::size_t>(out_), bias.grad);
  Tensor gi({n, static_cast<std::size_t>(in_)});
  as_matrix(gi, n, static_cast<std::size_t>(in_)).noalias() =
    go * as_matrix(static_cast<const Tensor &>(weight.value), static_cast<std::size_t>(in_),
                   static_cast<std::size_t>(out_))
           .transpose();
  return gi;
}

// ---------------------------------------------------------------------------
// MaxPoolRows

Tensor MaxPoolRows::forward(const Tensor & input)
{
  require_rank(input, 2, "MaxPoolRows");
  rows_ = input.dim(0);
  const std::size_t c = input.dim(1);
  if (rows_ == 0) {
    throw std::invalid_argument("MaxPoolRows: empty input");
  }
  argmax_.assign(c, 0);
  Tensor out({1, c});
  for (std::size_t k = 0; k < c; ++k) {
    out[k] = input[k];
  }
  for (std::size_t r = 1; r < rows_; ++r) {
    const double * row = input.data() + r * c;
    for (std::size_t k = 0; k < c; ++k) {
      if (row[k] > out[k]) {
        out[k] = row[k];
        argmax_[k] = r;
      }
    }
  }
  return out;
}

Tensor MaxPoolRows::backward(const Tensor & grad_output) const
{
  const std::size_t c = argmax_.size();
  if (grad_output.size() != c) {
    throw std::invalid_argument("MaxPoolRows::backward: gradient shape mismatch");
  }
  Tensor g({rows_, c});
  for (std::size_t k = 0; k < c; ++k) {
    g[argmax_[k] * c + k] = grad_output[k];
  }
  return g;
}

// ---------------------------------------------------------------------------
// Channel concat

Tensor concat_channels(const Tensor & a, const Tensor & b)
{
  require_rank(a, 3, "concat_channels");
  require_rank(b, 3, "concat_channels");
  if (a.dim(0) != b.dim(0) || a.dim(1) != b.dim(1)) {
    throw std::invalid_argument("concat_channels: spatial mismatch " + a.shape_string() + " vs " +
                                b.shape_string());
  }
  const std::size_t ca = a.dim(2);
  const std::size_t cb = b.dim(2);
  const std::size_t pixels = a.dim(0) * a.dim(1);
  Tensor out({a.dim(0), a.dim(1), ca + cb});
  for (std::size_t p = 0; p < pixels; ++p) {
    std::memcpy(out.data() + p * (ca + cb), a.data() + p * ca, sizeof(double) * ca);
    std::memcpy(out.data() + p * (ca + cb) + ca, b.data() + p * cb, sizeof(double) * cb);
  }
  return out;
}

std::pair<Tensor, Tensor> split_channels(const Tensor & grad, std::size_t channels_a)
{
  require_rank(grad, 3, "split_channels");
  const std::size_t c = grad.dim(2);
  const std::size_t cb = c - channels_a;
  const std::size_t pixels = grad.dim(0) * grad.dim(1);
  Tensor a({grad.dim(0), grad.dim(1), channels_a});
  Tensor b({grad.dim(0), grad.dim(1), cb});
  for (std::size_t p = 0; p < pixels; ++p) {
    std::memcpy(a.data() + p * channels_a, grad.data() + p * c, sizeof(double) * channels_a);
    std::memcpy(b.data() + p * cb, grad.data() + p * c + channels_a, sizeof(double) * cb);
  }
  return {std::move(a), std::move(b)};
}

// ---------------------------------------------------------------------------
// ResidualBlock

ResidualBlock::ResidualBlock(const std::string & name, int in_channels, int out_channels,
                             int num_units, int mid_channels, double slope)
: entry(name + ".entry", in_channels, out_channels, 3, 2), entry_act(slope)
{
  for (int i = 0; i < num_units; ++i) {
    const std::string un = name + ".unit" + std::to_string(i);
    units.push_back({Conv2d(un + ".reduce", out_channels, mid_channels, 1, 1), LeakyRelu(slope),
                     Conv2d(un + ".expand", mid_channels, out_channels, 3, 1), LeakyRelu(slope)});
  }
}

void ResidualBlock::init(Rng & rng)
{
  entry.init(rng);
  for (auto & u : units) {
    u.reduce.init(rng);
    // Residual branches start small so deep stacks stay near identity.
    u.expand.init(rng, 0.5);
  }
}

std::vector<Param *> ResidualBlock::params()
{
  std::vector<Param *> out = entry.params();
  for (auto & u : units) {
    for (Param * p : u.reduce.params()) out.push_back(p);
    for (Param * p : u.expand.params()) out.push_back(p);
  }
  return out;
}

Tensor ResidualBlock::forward(const Tensor & input)
{
  Tensor x = entry_act.forward(entry.forward(input));
  for (auto & u : units) {
    Tensor f = u.expand_act.forward(u.expand.forward(u.reduce_act.forward(u.reduce.forward(x))));
    f += x;
    x = std::move(f);
  }
  return x;
}

Tensor ResidualBlock::backward(const Tensor & grad_output)
{
  Tensor g = grad_output;
  for (auto it = units.rbegin(); it != units.rend(); ++it) {
    Tensor branch = it->reduce.backward(
      it->reduce_act.backward(it->expand.backward(it->expand_act.backward(g))));
    g += branch;
  }
  return entry.backward(entry_act.backward(g));
}

}  // namespace fvdet::nnet
