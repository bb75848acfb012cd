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


#include "fvdet/nnet/pgnet.hpp"

#include <algorithm>
#include <stdexcept>

#include "fvdet/proposal/codec.hpp"

namespace fvdet::nnet
{

int PGNetConfig::head_channels(std::size_t i) const
{
  return priors_per_head.at(i) * proposal::values_per_prior(num_classes);
}

void PGNetConfig::validate() const
{
  if (widths.size() != 4 || units.size() != 4) {
    throw std::invalid_argument("PGNetConfig: exactly four residual stages are required");
  }
  if (input_height % 16 != 0 || input_width % 16 != 0 || input_height <= 0 || input_width <= 0) {
    throw std::invalid_argument("PGNetConfig: input size must be a positive multiple of 16");
  }
  if (head_strides.empty() || head_strides.size() != priors_per_head.size()) {
    throw std::invalid_argument("PGNetConfig: head_strides and priors_per_head disagree");
  }
  for (std::size_t i = 0; i < head_strides.size(); ++i) {
    const int s = head_strides[i];
    if (s != 4 && s != 8 && s != 16) {
      throw std::invalid_argument("PGNetConfig: head strides must be 4, 8 or 16");
    }
    if (i > 0 && s <= head_strides[i - 1]) {
      throw std::invalid_argument("PGNetConfig: head strides must be strictly ascending");
    }
    if (priors_per_head[i] <= 0) {
      throw std::invalid_argument("PGNetConfig: every head needs at least one prior");
    }
  }
  if (num_classes <= 0 || input_channels <= 0 || stem_channels <= 0) {
    throw std::invalid_argument("PGNetConfig: non-positive channel count");
  }
  for (int w : widths) {
    if (w < 2) throw std::invalid_argument("PGNetConfig: stage width below 2");
  }
}

Tensor map_to_input(const fvproj::FrontViewMap & map, double max_radius, double height_scale)
{
  Tensor t({static_cast<std::size_t>(map.height()), static_cast<std::size_t>(map.width()), 3});
  for (int u = 0; u < map.height(); ++u) {
    for (int v = 0; v < map.width(); ++v) {
      if (!map.occupied(u, v)) continue;
      const auto uu = static_cast<std::size_t>(u);
      const auto vv = static_cast<std::size_t>(v);
      t.at(uu, vv, 0) = map.channel(u, v, fvproj::FrontViewMap::kHeight) / height_scale;
      t.at(uu, vv, 1) = map.channel(u, v, fvproj::FrontViewMap::kRadial) / max_radius;
      t.at(uu, vv, 2) = map.channel(u, v, fvproj::FrontViewMap::kIntensity);
    }
  }
  return t;
}

PGNet::PGNet(PGNetConfig cfg) : cfg_(std::move(cfg))
{
  cfg_.validate();
  const double a = cfg_.slope;
  stem_ = Conv2d("stem", cfg_.input_channels, cfg_.stem_channels, 3, 1);
  stem_act_ = LeakyRelu(a);
  int in = cfg_.stem_channels;
  for (int i = 0; i < 4; ++i) {
    const int w = cfg_.widths[static_cast<std::size_t>(i)];
    blocks_.emplace_back("block" + std::to_string(i + 1), in, w,
                         cfg_.units[static_cast<std::size_t>(i)], std::max(w / 2, 1), a);
    in = w;
  }
  min_stride_ = cfg_.head_strides.front();

  const int c2 = cfg_.widths[1];
  const int c3 = cfg_.widths[2];
  const int c4 = cfg_.widths[3];
  neck16_ = Conv2d("neck16", c4, c4, 3, 1);
  neck16_act_ = LeakyRelu(a);
  if (has_head(16)) {
    head16_ = Conv2d("head16", c4, cfg_.head_channels(static_cast<std::size_t>(head_position(16))),
                     1, 1);
  }
  if (min_stride_ <= 8) {
    lateral8_channels_ = static_cast<std::size_t>(c3);
    lateral8_ = Conv2d("lateral8", c4, c3, 1, 1);
    lateral8_act_ = LeakyRelu(a);
    neck8_ = Conv2d("neck8", 2 * c3, c3, 3, 1);
    neck8_act_ = LeakyRelu(a);
    if (has_head(8)) {
      head8_ = Conv2d("head8", c3, cfg_.head_channels(static_cast<std::size_t>(head_position(8))),
                      1, 1);
    }
  }
  if (min_stride_ <= 4) {
    lateral4_channels_ = static_cast<std::size_t>(c2);
    lateral4_ = Conv2d("lateral4", c3, c2, 1, 1);
    lateral4_act_ = LeakyRelu(a);
    neck4_ = Conv2d("neck4", 2 * c2, c2, 3, 1);
    neck4_act_ = LeakyRelu(a);
    head4_ = Conv2d("head4", c2, cfg_.head_channels(static_cast<std::size_t>(head_position(4))),
                    1, 1);
  }
}

bool PGNet::has_head(int stride) const
{
  return std::find(cfg_.head_strides.begin(), cfg_.head_strides.end(), stride) !=
         cfg_.head_strides.end();
}

int PGNet::head_position(int stride) const
{
  const auto it = std::find(cfg_.head_strides.begin(), cfg_.head_strides.end(), stride);
  return it == cfg_.head_strides.end() ? -1
                                       : static_cast<int>(it - cfg_.head_strides.begin());
}

void PGNet::init(Rng & rng)
{
  stem_.init(rng);
  for (auto & b : blocks_) b.init(rng);
  neck16_.init(rng);
  if (min_stride_ <= 8) {
    lateral8_.init(rng);
    neck8_.init(rng);
  }
  if (min_stride_ <= 4) {
    lateral4_.init(rng);
    neck4_.init(rng);
  }
  const int vpp = proposal::values_per_prior(cfg_.num_classes);
  auto init_head = [&](Conv2d & head) {
    head.init(rng, 0.1);
    for (int c = 6; c < head.out_channels(); c += vpp) {
      head.bias.value[static_cast<std::size_t>(c)] = cfg_.conf_bias_init;
    }
  };
  if (has_head(4)) init_head(head4_);
  if (has_head(8)) init_head(head8_);
  if (has_head(16)) init_head(head16_);
}

std::vector<Param *> PGNet::params()
{
  std::vector<Param *> out = stem_.params();
  auto add = [&out](std::vector<Param *> ps) { out.insert(out.end(), ps.begin(), ps.end()); };
  for (auto & b : blocks_) add(b.params());
  add(neck16_.params());
  if (has_head(16)) add(head16_.params());
  if (min_stride_ <= 8) {
    add(lateral8_.params());
    add(neck8_.params());
    if (has_head(8)) add(head8_.params());
  }
  if (min_stride_ <= 4) {
    add(lateral4_.params());
    add(neck4_.params());
    add(head4_.params());
  }
  return out;
}

std::vector<Tensor> PGNet::forward(const Tensor & input)
{
  if (input.rank() != 3 || static_cast<int>(input.dim(0)) != cfg_.input_height ||
      static_cast<int>(input.dim(1)) != cfg_.input_width ||
      static_cast<int>(input.dim(2)) != cfg_.input_channels) {
    throw std::invalid_argument("PGNet: input shape " + input.shape_string() +
                                " does not match the config");
  }
  Tensor x = stem_act_.forward(stem_.forward(input));
  std::vector<Tensor> stage(4);
  for (std::size_t i = 0; i < 4; ++i) {
    x = blocks_[i].forward(x);
    stage[i] = x;
  }
  std::vector<Tensor> heads(cfg_.head_strides.size());
  const Tensor n16 = neck16_act_.forward(neck16_.forward(stage[3]));
  if (has_head(16)) heads[static_cast<std::size_t>(head_position(16))] = head16_.forward(n16);
  if (min_stride_ <= 8) {
    const Tensor l8 = up8_.forward(lateral8_act_.forward(lateral8_.forward(n16)));
    const Tensor n8 = neck8_act_.forward(neck8_.forward(concat_channels(l8, stage[2])));
    if (has_head(8)) heads[static_cast<std::size_t>(head_position(8))] = head8_.forward(n8);
    if (min_stride_ <= 4) {
      const Tensor l4 = up4_.forward(lateral4_act_.forward(lateral4_.forward(n8)));
      const Tensor n4 = neck4_act_.forward(neck4_.forward(concat_channels(l4, stage[1])));
      heads[static_cast<std::size_t>(head_position(4))] = head4_.forward(n4);
    }
  }
  return heads;
}

Tensor PGNet::backward(const std::vector<Tensor> & head_grads)
{
  if (head_grads.size() != cfg_.head_strides.size()) {
    throw std::invalid_argument("PGNet::backward: one gradient per head is required");
  }
  std::vector<Tensor> g_stage(4);
  Tensor g_n8;
  if (min_stride_ <= 4) {
    Tensor g_n4 = head4_.backward(head_grads[static_cast<std::size_t>(head_position(4))]);
    auto [g_l4, g_s2] =
      split_channels(neck4_.backward(neck4_act_.backward(g_n4)), lateral4_channels_);
    g_stage[1] = std::move(g_s2);
    g_n8 = lateral4_.backward(lateral4_act_.backward(up4_.backward(g_l4)));
  }
  Tensor g_n16;
  if (min_stride_ <= 8) {
    if (has_head(8)) {
      Tensor g = head8_.backward(head_grads[static_cast<std::size_t>(head_position(8))]);
      if (g_n8.empty()) {
        g_n8 = std::move(g);
      } else {
        g_n8 += g;
      }
    }
    auto [g_l8, g_s3] =
      split_channels(neck8_.backward(neck8_act_.backward(g_n8)), lateral8_channels_);
    g_stage[2] = std::move(g_s3);
    g_n16 = lateral8_.backward(lateral8_act_.backward(up8_.backward(g_l8)));
  }
  if (has_head(16)) {
    Tensor g = head16_.backward(head_grads[static_cast<std::size_t>(head_position(16))]);
    if (g_n16.empty()) {
      g_n16 = std::move(g);
    } else {
      g_n16 += g;
    }
  }
  g_stage[3] = neck16_.backward(neck16_act_.backward(g_n16));

  Tensor g = std::move(g_stage[3]);
  for (int i = 3; i >= 0; --i) {
    g = blocks_[static_cast<std::size_t>(i)].backward(g);
    if (i > 0 && !g_stage[static_cast<std::size_t>(i - 1)].empty()) {
      g += g_stage[static_cast<std::size_t>(i - 1)];
    }
  }
  return stem_.backward(stem_act_.backward(g));
}

}  // namespace fvdet::nnet
