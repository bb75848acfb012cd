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


#include "fvdet/proposal/loss.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace fvdet::proposal
{

namespace
{

double clamp_prob(double p)
{
  return std::clamp(p, kProbClamp, 1.0 - kProbClamp);
}

double bce_term(double p, double y)
{
  const double pc = clamp_prob(p);
  return -(y * std::log(pc) + (1.0 - y) * std::log(1.0 - pc));
}

// d bce_term(sigmoid(t), y) / dt; zero where the clamp is active.
double bce_logit_grad(double p, double y)
{
  if (p < kProbClamp || p > 1.0 - kProbClamp) {
    return 0.0;
  }
  return p - y;
}

}  // namespace

double bce(std::span<const double> p, std::span<const double> y)
{
  if (p.size() != y.size()) {
    throw std::invalid_argument("bce: length mismatch");
  }
  if (p.empty()) {
    return 0.0;
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    sum += bce_term(p[i], y[i]);
  }
  return sum / static_cast<double>(p.size());
}

double huber(double x, double delta)
{
  const double a = std::abs(x);
  return a < delta ? 0.5 * x * x : delta * a - 0.5 * delta * delta;
}

double huber_grad(double x, double delta)
{
  if (std::abs(x) < delta) {
    return x;
  }
  return x > 0.0 ? delta : -delta;
}

RawPrediction HeadView::raw(int row, int col, int prior) const
{
  RawPrediction r;
  const std::size_t o = index(row, col, prior, 0);
  r.tx = data[o];
  r.ty = data[o + 1];
  r.tw = data[o + 2];
  r.th = data[o + 3];
  r.tr1 = data[o + 4];
  r.tr2 = data[o + 5];
  r.conf_logit = data[o + 6];
  r.class_logits.assign(data.begin() + static_cast<std::ptrdiff_t>(o + kBoxFields),
                        data.begin() + static_cast<std::ptrdiff_t>(o + kBoxFields + num_classes));
  return r;
}

Stage1Loss stage1_loss(std::span<const HeadView> heads, const TargetAssignment & assignment,
                       const std::vector<Stage1Target> & targets, const LossWeights & weights,
                       bool with_grad)
{
  if (heads.size() != assignment.grids().size()) {
    throw std::invalid_argument("stage1_loss: head count does not match the assignment");
  }
  Stage1Loss out;
  if (with_grad) {
    for (const auto & h : heads) {
      out.grads.emplace_back(h.data.size(), 0.0);
    }
  }

  // Confidence over every slot that is not ignored.
  std::size_t conf_n = 0;
  for (std::size_t s = 0; s < heads.size(); ++s) {
    const HeadView & h = heads[s];
    for (int r = 0; r < h.grid.rows; ++r) {
      for (int c = 0; c < h.grid.cols; ++c) {
        for (int k = 0; k < h.priors; ++k) {
          if (assignment.state(static_cast<int>(s), r, c, k) != TargetAssignment::kIgnored) {
            ++conf_n;
          }
        }
      }
    }
  }
  if (conf_n > 0) {
    const double scale = weights.conf / static_cast<double>(conf_n);
    double sum = 0.0;
    for (std::size_t s = 0; s < heads.size(); ++s) {
      const HeadView & h = heads[s];
      for (int r = 0; r < h.grid.rows; ++r) {
        for (int c = 0; c < h.grid.cols; ++c) {
          for (int k = 0; k < h.priors; ++k) {
            const int st = assignment.state(static_cast<int>(s), r, c, k);
            if (st == TargetAssignment::kIgnored) continue;
            const double y = st >= 0 ? 1.0 : 0.0;
            const std::size_t idx = h.index(r, c, k, 6);
            const double p = sigmoid(h.data[idx]);
            sum += bce_term(p, y);
            if (with_grad) {
              out.grads[s][idx] += scale * bce_logit_grad(p, y);
            }
          }
        }
      }
    }
    out.conf = sum / static_cast<double>(conf_n);
  }

  const std::size_t npos = targets.size();
  if (npos > 0) {
    double coord_sum = 0.0;
    double cls_sum = 0.0;
    double reg_sum = 0.0;
    std::size_t cls_n = 0;
    for (const auto & t : targets) {
      cls_n += t.class_targets.size();
    }
    const double coord_scale = weights.coord / static_cast<double>(2 * npos);
    const double cls_scale = cls_n > 0 ? weights.cls / static_cast<double>(cls_n) : 0.0;
    const double reg_scale = weights.reg / static_cast<double>(npos);

    for (const auto & t : targets) {
      const auto s = static_cast<std::size_t>(t.slot.scale);
      const HeadView & h = heads[s];
      const std::size_t o = h.index(t.slot.row, t.slot.col, t.slot.local_prior, 0);

      const double offsets[2] = {t.offset_x, t.offset_y};
      for (int i = 0; i < 2; ++i) {
        const double p = sigmoid(h.data[o + i]);
        coord_sum += bce_term(p, offsets[i]);
        if (with_grad) out.grads[s][o + i] += coord_scale * bce_logit_grad(p, offsets[i]);
      }

      const double reg_targets[4] = {t.tw, t.th, t.tr1, t.tr2};
      for (int i = 0; i < 4; ++i) {
        const double diff = h.data[o + 2 + i] - reg_targets[i];
        reg_sum += huber(diff, weights.huber_delta);
        if (with_grad) {
          out.grads[s][o + 2 + i] += reg_scale * huber_grad(diff, weights.huber_delta);
        }
      }

      for (std::size_t k = 0; k < t.class_targets.size(); ++k) {
        const std::size_t idx = o + kBoxFields + k;
        const double p = sigmoid(h.data[idx]);
        cls_sum += bce_term(p, t.class_targets[k]);
        if (with_grad) out.grads[s][idx] += cls_scale * bce_logit_grad(p, t.class_targets[k]);
      }
    }
    out.coord = coord_sum / static_cast<double>(2 * npos);
    out.cls = cls_n > 0 ? cls_sum / static_cast<double>(cls_n) : 0.0;
    out.reg = reg_sum / static_cast<double>(npos);
  }

  out.total = weights.coord * out.coord + weights.conf * out.conf + weights.cls * out.cls +
              weights.reg * out.reg;
  return out;
}

std::string loss_components_json(const Stage1Loss & loss)
{
  nlohmann::json j;
  j["coord"] = loss.coord;
  j["conf"] = loss.conf;
  j["cls"] = loss.cls;
  j["reg"] = loss.reg;
  j["total"] = loss.total;
  return j.dump();
}

}  // namespace fvdet::proposal
