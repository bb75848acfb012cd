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


#include "fvdet/proposal/codec.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace fvdet::proposal
{

std::vector<GridSpec> make_grids(const std::vector<int> & strides, int map_height, int map_width)
{
  std::vector<GridSpec> grids;
  for (int s : strides) {
    if (s <= 0 || map_height % s != 0 || map_width % s != 0) {
      throw std::invalid_argument("make_grids: stride " + std::to_string(s) +
                                  " does not divide the map");
    }
    grids.push_back({s, map_height / s, map_width / s});
  }
  return grids;
}

double sigmoid(double x)
{
  // Branching keeps exp() from overflowing for large |x|.
  if (x >= 0.0) {
    return 1.0 / (1.0 + std::exp(-x));
  }
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double logit(double p)
{
  if (!(p > 0.0) || !(p < 1.0)) {
    throw std::domain_error("logit: argument outside (0, 1)");
  }
  return std::log(p) - std::log1p(-p);
}

Proposal3D decode(const RawPrediction & raw, Cell cell, const AnchorPrior & prior,
                  double max_radius, int stride)
{
  Proposal3D p;
  p.bx = sigmoid(raw.tx) + cell.cx;
  p.by = sigmoid(raw.ty) + cell.cy;
  p.bw = prior.width * std::exp(raw.tw);
  p.bh = prior.height * std::exp(raw.th);
  p.r1 = raw.tr1 * max_radius;
  p.r2 = raw.tr2 * max_radius;
  p.confidence = sigmoid(raw.conf_logit);
  p.class_scores.reserve(raw.class_logits.size());
  for (double l : raw.class_logits) {
    p.class_scores.push_back(sigmoid(l));
  }
  p.stride = stride;
  return p;
}

RawPrediction encode(const Proposal3D & proposal, Cell cell, const AnchorPrior & prior,
                     double max_radius)
{
  const double ox = proposal.bx - cell.cx;
  const double oy = proposal.by - cell.cy;
  if (!(ox > 0.0 && ox < 1.0) || !(oy > 0.0 && oy < 1.0)) {
    throw std::domain_error("encode: center offset must lie strictly inside (0, 1)");
  }
  if (!(proposal.bw > 0.0) || !(proposal.bh > 0.0)) {
    throw std::domain_error("encode: box sizes must be positive");
  }
  if (!(max_radius > 0.0)) {
    throw std::domain_error("encode: maximum radius must be positive");
  }
  RawPrediction raw;
  raw.tx = logit(ox);
  raw.ty = logit(oy);
  raw.tw = std::log(proposal.bw / prior.width);
  raw.th = std::log(proposal.bh / prior.height);
  raw.tr1 = proposal.r1 / max_radius;
  raw.tr2 = proposal.r2 / max_radius;
  raw.conf_logit = logit(proposal.confidence);
  raw.class_logits.reserve(proposal.class_scores.size());
  for (double s : proposal.class_scores) {
    raw.class_logits.push_back(logit(s));
  }
  return raw;
}

}  // namespace fvdet::proposal
