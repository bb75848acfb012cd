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


#include "fvdet/proposal/anchors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>

#include "fvdet/core/rng.hpp"

namespace fvdet::proposal
{

namespace
{

double sq_dist(const BoxSize & a, const BoxSize & b)
{
  const double dw = a.w - b.w;
  const double dh = a.h - b.h;
  return dw * dw + dh * dh;
}

std::vector<BoxSize> kmeanspp_init(const std::vector<BoxSize> & boxes, int k, Rng & rng)
{
  std::vector<BoxSize> centers;
  centers.push_back(boxes[rng.index(boxes.size())]);
  std::vector<double> d2(boxes.size(), std::numeric_limits<double>::infinity());
  while (static_cast<int>(centers.size()) < k) {
    double total = 0.0;
    for (std::size_t i = 0; i < boxes.size(); ++i) {
      d2[i] = std::min(d2[i], sq_dist(boxes[i], centers.back()));
      total += d2[i];
    }
    std::size_t pick = 0;
    if (total > 0.0) {
      const double target = rng.uniform() * total;
      double acc = 0.0;
      pick = boxes.size() - 1;
      for (std::size_t i = 0; i < boxes.size(); ++i) {
        acc += d2[i];
        if (acc > target) {
          pick = i;
          break;
        }
      }
    } else {
      pick = rng.index(boxes.size());
    }
    centers.push_back(boxes[pick]);
  }
  return centers;
}

}  // namespace

std::vector<AnchorPrior> cluster_anchors(const std::vector<BoxSize> & boxes, int k,
                                         std::uint64_t seed, int num_scales)
{
  if (k <= 0) {
    throw std::invalid_argument("cluster_anchors: K must be positive");
  }
  if (static_cast<int>(boxes.size()) < k) {
    throw std::invalid_argument("cluster_anchors: fewer boxes than clusters");
  }
  if (num_scales <= 0) {
    throw std::invalid_argument("cluster_anchors: need at least one scale");
  }
  for (const auto & b : boxes) {
    if (!(b.w > 0.0) || !(b.h > 0.0)) {
      throw std::invalid_argument("cluster_anchors: box sizes must be positive");
    }
  }

  Rng rng(seed);
  std::vector<BoxSize> centers = kmeanspp_init(boxes, k, rng);
  std::vector<int> label(boxes.size(), -1);

  for (int iter = 0; iter < 300; ++iter) {
    bool changed = false;
    for (std::size_t i = 0; i < boxes.size(); ++i) {
      int best = 0;
      double best_d = sq_dist(boxes[i], centers[0]);
      for (int c = 1; c < k; ++c) {
        const double d = sq_dist(boxes[i], centers[static_cast<std::size_t>(c)]);
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      if (label[i] != best) {
        label[i] = best;
        changed = true;
      }
    }

    std::vector<BoxSize> sum(static_cast<std::size_t>(k));
    std::vector<int> count(static_cast<std::size_t>(k), 0);
    for (std::size_t i = 0; i < boxes.size(); ++i) {
      const auto c = static_cast<std::size_t>(label[i]);
      sum[c].w += boxes[i].w;
      sum[c].h += boxes[i].h;
      ++count[c];
    }
    for (int c = 0; c < k; ++c) {
      const auto cu = static_cast<std::size_t>(c);
      if (count[cu] > 0) {
        centers[cu] = {sum[cu].w / count[cu], sum[cu].h / count[cu]};
        continue;
      }
      // Empty cluster: move it onto the box farthest from its centroid.
      std::size_t far = 0;
      double far_d = -1.0;
      for (std::size_t i = 0; i < boxes.size(); ++i) {
        const double d = sq_dist(boxes[i], centers[static_cast<std::size_t>(label[i])]);
        if (d > far_d) {
          far_d = d;
          far = i;
        }
      }
      centers[cu] = boxes[far];
      label[far] = c;
      changed = true;
    }
    if (!changed) {
      break;
    }
  }

  std::stable_sort(centers.begin(), centers.end(), [](const BoxSize & a, const BoxSize & b) {
    return a.w * a.h < b.w * b.h;
  });
  std::vector<AnchorPrior> priors;
  priors.reserve(centers.size());
  for (int i = 0; i < k; ++i) {
    const auto & c = centers[static_cast<std::size_t>(i)];
    priors.push_back({c.w, c.h, i * num_scales / k});
  }
  return priors;
}

void write_anchors(const std::vector<AnchorPrior> & priors, const std::filesystem::path & path)
{
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot create " + path.string());
  }
  out.precision(17);
  for (const auto & p : priors) {
    out << p.width << ' ' << p.height << ' ' << p.scale_index << '\n';
  }
  if (!out) {
    throw std::runtime_error("write error on " + path.string());
  }
}

std::vector<AnchorPrior> read_anchors(const std::filesystem::path & path)
{
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open " + path.string());
  }
  std::vector<AnchorPrior> priors;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) {
      continue;
    }
    std::istringstream ls(line);
    AnchorPrior p;
    std::string extra;
    if (!(ls >> p.width >> p.height >> p.scale_index) || (ls >> extra) || !(p.width > 0.0) ||
        !(p.height > 0.0) || p.scale_index < 0) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                               ": expected \"p_w p_h scale_index\"");
    }
    priors.push_back(p);
  }
  return priors;
}

std::vector<std::pair<int, AnchorPrior>> priors_for_scale(const std::vector<AnchorPrior> & priors,
                                                          int scale)
{
  std::vector<std::pair<int, AnchorPrior>> out;
  for (std::size_t i = 0; i < priors.size(); ++i) {
    if (priors[i].scale_index == scale) {
      out.emplace_back(static_cast<int>(i), priors[i]);
    }
  }
  return out;
}

}  // namespace fvdet::proposal
