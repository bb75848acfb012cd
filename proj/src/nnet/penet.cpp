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


#include "fvdet/nnet/penet.hpp"

#include <stdexcept>

namespace fvdet::nnet
{

void PENetConfig::validate() const
{
  if (point_mlp.empty() || tnet_mlp.empty()) {
    throw std::invalid_argument("PENetConfig: point MLPs need at least one layer");
  }
  if (size_templates <= 0 || heading_bins <= 0) {
    throw std::invalid_argument("PENetConfig: template and bin counts must be positive");
  }
  for (int w : point_mlp) if (w <= 0) throw std::invalid_argument("PENetConfig: bad width");
  for (int w : fc) if (w <= 0) throw std::invalid_argument("PENetConfig: bad width");
  for (int w : tnet_mlp) if (w <= 0) throw std::invalid_argument("PENetConfig: bad width");
}

Tensor PENet::Stack::forward(const Tensor & x)
{
  Tensor y = x;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    y = acts[i].forward(layers[i].forward(y));
  }
  return y;
}

Tensor PENet::Stack::backward(const Tensor & g)
{
  Tensor d = g;
  for (std::size_t i = layers.size(); i-- > 0;) {
    d = layers[i].backward(acts[i].backward(d));
  }
  return d;
}

PENet::PENet(PENetConfig cfg) : cfg_(std::move(cfg))
{
  cfg_.validate();
  auto build = [this](Stack & s, const std::string & name, int in, const std::vector<int> & widths) {
    for (std::size_t i = 0; i < widths.size(); ++i) {
      s.layers.emplace_back(name + std::to_string(i), in, widths[i]);
      s.acts.emplace_back(cfg_.slope);
      in = widths[i];
    }
    return in;
  };
  const int t = build(tnet_points_, "tnet.mlp", 3, cfg_.tnet_mlp);
  tnet_out_ = Dense("tnet.out", t, 3);
  const int p = build(point_mlp_, "mlp", 3, cfg_.point_mlp);
  const int f = build(fc_, "fc", p, cfg_.fc);
  out_ = Dense("out", f, cfg_.output_dim());
}

void PENet::init(Rng & rng)
{
  for (auto & l : tnet_points_.layers) l.init(rng);
  tnet_out_.init(rng, 0.1);
  for (auto & l : point_mlp_.layers) l.init(rng);
  for (auto & l : fc_.layers) l.init(rng);
  out_.init(rng, 0.1);
}

std::vector<Param *> PENet::params()
{
  std::vector<Param *> out;
  auto add = [&out](Dense & d) {
    out.push_back(&d.weight);
    out.push_back(&d.bias);
  };
  for (auto & l : tnet_points_.layers) add(l);
  add(tnet_out_);
  for (auto & l : point_mlp_.layers) add(l);
  for (auto & l : fc_.layers) add(l);
  add(out_);
  return out;
}

PENetOutput PENet::forward(const Tensor & points)
{
  if (points.rank() != 2 || points.dim(1) != 3) {
    throw std::invalid_argument("PENet: expected n x 3 points, got " + points.shape_string());
  }
  rows_ = points.dim(0);
  if (rows_ == 0) {
    throw std::invalid_argument("PENet: empty point set");
  }
  const Tensor offset = tnet_out_.forward(tnet_pool_.forward(tnet_points_.forward(points)));
  Tensor centered = points;
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t k = 0; k < 3; ++k) {
      centered[r * 3 + k] -= offset[k];
    }
  }
  const Tensor out = out_.forward(fc_.forward(pool_.forward(point_mlp_.forward(centered))));
  PENetOutput result;
  result.params = out.storage();
  result.offset = {offset[0], offset[1], offset[2]};
  return result;
}

Tensor PENet::backward(const std::vector<double> & grad_params,
                       const std::array<double, 3> & grad_offset)
{
  if (grad_params.size() != static_cast<std::size_t>(cfg_.output_dim())) {
    throw std::invalid_argument("PENet::backward: gradient length mismatch");
  }
  const Tensor g_out({1, grad_params.size()}, grad_params);
  const Tensor g_centered =
    point_mlp_.backward(pool_.backward(fc_.backward(out_.backward(g_out))));
  Tensor g_offset({1, 3});
  for (std::size_t k = 0; k < 3; ++k) {
    g_offset[k] = grad_offset[k];
    for (std::size_t r = 0; r < rows_; ++r) {
      g_offset[k] -= g_centered[r * 3 + k];
    }
  }
  Tensor g_points = tnet_points_.backward(tnet_pool_.backward(tnet_out_.backward(g_offset)));
  g_points += g_centered;
  return g_points;
}

}  // namespace fvdet::nnet
