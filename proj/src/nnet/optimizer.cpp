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


#include "fvdet/nnet/optimizer.hpp"

#include <cmath>
#include <stdexcept>

namespace fvdet::nnet
{

void zero_grad(const std::vector<Param *> & params)
{
  for (Param * p : params) p->grad.fill(0.0);
}

std::size_t parameter_count(const std::vector<Param *> & params)
{
  std::size_t n = 0;
  for (const Param * p : params) n += p->value.size();
  return n;
}

void Adam::step(const std::vector<Param *> & params)
{
  if (m_.empty()) {
    for (const Param * p : params) {
      m_.emplace_back(p->value.size(), 0.0);
      v_.emplace_back(p->value.size(), 0.0);
    }
  }
  if (m_.size() != params.size()) {
    throw std::invalid_argument("Adam: parameter list changed between steps");
  }
  double scale = 1.0;
  if (cfg_.clip_norm > 0.0) {
    double sq = 0.0;
    for (const Param * p : params) {
      for (double g : p->grad.values()) sq += g * g;
    }
    const double norm = std::sqrt(sq);
    if (norm > cfg_.clip_norm) scale = cfg_.clip_norm / norm;
  }
  ++t_;
  const double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
  for (std::size_t i = 0; i < params.size(); ++i) {
    Param & p = *params[i];
    if (p.value.size() != m_[i].size()) {
      throw std::invalid_argument("Adam: parameter shape changed between steps");
    }
    double * w = p.value.data();
    const double * g = p.grad.data();
    double * m = m_[i].data();
    double * v = v_[i].data();
    for (std::size_t k = 0; k < m_[i].size(); ++k) {
      const double gk = g[k] * scale;
      m[k] = cfg_.beta1 * m[k] + (1.0 - cfg_.beta1) * gk;
      v[k] = cfg_.beta2 * v[k] + (1.0 - cfg_.beta2) * gk * gk;
      w[k] -= cfg_.learning_rate * (m[k] / bc1) / (std::sqrt(v[k] / bc2) + cfg_.epsilon);
    }
  }
}

}  // namespace fvdet::nnet
