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


#ifndef FVDET__TESTS__ORACLES_HPP_
#define FVDET__TESTS__ORACLES_HPP_

// Independent reference implementations used as test oracles. They favour
// the most literal formulation over speed.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "fvdet/core/geometry.hpp"
#include "fvdet/core/rng.hpp"
#include "fvdet/eval/average_precision.hpp"
#include "fvdet/fvproj/projection.hpp"
#include "fvdet/nnet/layers.hpp"
#include "fvdet/nnet/tensor.hpp"
#include "fvdet/proposal/codec.hpp"

namespace fvdet::test
{

// ---------------------------------------------------------------- gradients

struct GradCheckResult
{
  double rel_error = 0.0;  // ||a - n|| / max(||a|| + ||n||, tiny)
  std::size_t checked = 0;
};

/// Central differences of `loss` with respect to `value` at the sampled
/// entries, compared with `analytic`. At most `max_entries` entries are
/// probed (all when the tensor is smaller), chosen with `rng`.
inline GradCheckResult grad_check(const std::function<double()> & loss, std::vector<double> & value,
                                  const std::vector<double> & analytic, Rng & rng,
                                  std::size_t max_entries = 40, double step = 1e-6)
{
  std::vector<std::size_t> idx(value.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  if (idx.size() > max_entries) {
    for (std::size_t i = 0; i < max_entries; ++i) {
      std::swap(idx[i], idx[i + rng.index(idx.size() - i)]);
    }
    idx.resize(max_entries);
  }
  double diff2 = 0.0;
  double a2 = 0.0;
  double n2 = 0.0;
  for (std::size_t i : idx) {
    const double keep = value[i];
    value[i] = keep + step;
    const double up = loss();
    value[i] = keep - step;
    const double down = loss();
    value[i] = keep;
    const double numeric = (up - down) / (2.0 * step);
    diff2 += (numeric - analytic[i]) * (numeric - analytic[i]);
    a2 += analytic[i] * analytic[i];
    n2 += numeric * numeric;
  }
  const double denom = std::max(std::sqrt(a2) + std::sqrt(n2), 1e-12);
  return {std::sqrt(diff2) / denom, idx.size()};
}

inline nnet::Tensor random_tensor(std::vector<std::size_t> shape, Rng & rng, double lo = -1.0,
                                  double hi = 1.0)
{
  nnet::Tensor t(std::move(shape));
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = rng.uniform(lo, hi);
  return t;
}

inline double dot(const nnet::Tensor & a, const nnet::Tensor & b)
{
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// --------------------------------------------------------------- convolution

/// Direct nested-loop cross-correlation with TensorFlow SAME padding.
inline nnet::Tensor naive_conv(const nnet::Tensor & x, const nnet::Tensor & w, const nnet::Tensor & b,
                               int stride)
{
  const int H = static_cast<int>(x.dim(0));
  const int W = static_cast<int>(x.dim(1));
  const int C = static_cast<int>(x.dim(2));
  const int K = static_cast<int>(w.dim(0));
  const int O = static_cast<int>(w.dim(3));
  const int oh = (H + stride - 1) / stride;
  const int ow = (W + stride - 1) / stride;
  const int pad_h = std::max((oh - 1) * stride + K - H, 0);
  const int pad_w = std::max((ow - 1) * stride + K - W, 0);
  const int top = pad_h / 2;
  const int left = pad_w / 2;
  nnet::Tensor y({static_cast<std::size_t>(oh), static_cast<std::size_t>(ow), static_cast<std::size_t>(O)});
  for (int i = 0; i < oh; ++i) {
    for (int j = 0; j < ow; ++j) {
      for (int o = 0; o < O; ++o) {
        double s = b[static_cast<std::size_t>(o)];
        for (int di = 0; di < K; ++di) {
          for (int dj = 0; dj < K; ++dj) {
            const int r = i * stride + di - top;
            const int c = j * stride + dj - left;
            if (r < 0 || c < 0 || r >= H || c >= W) continue;
            for (int ci = 0; ci < C; ++ci) {
              s += x[(static_cast<std::size_t>(r) * W + c) * C + ci] *
                   w[((static_cast<std::size_t>(di) * K + dj) * C + ci) * O + o];
            }
          }
        }
        y[(static_cast<std::size_t>(i) * ow + j) * O + o] = s;
      }
    }
  }
  return y;
}

// ------------------------------------------------------------------ geometry

/// Monte-Carlo BEV IoU: uniform samples over the union's bounding square.
inline double monte_carlo_iou_bev(const Box3D & a, const Box3D & b, std::size_t samples, Rng & rng)
{
  double lo_x = 1e300, hi_x = -1e300, lo_y = 1e300, hi_y = -1e300;
  for (const Box3D * box : {&a, &b}) {
    for (const auto & c : box_corners(*box)) {
      lo_x = std::min(lo_x, c.x);
      hi_x = std::max(hi_x, c.x);
      lo_y = std::min(lo_y, c.y);
      hi_y = std::max(hi_y, c.y);
    }
  }
  auto inside = [](const Box3D & box, double x, double y) {
    const double dx = x - box.cx;
    const double dy = y - box.cy;
    const double c = std::cos(box.heading);
    const double s = std::sin(box.heading);
    const double lx = c * dx + s * dy;
    const double ly = -s * dx + c * dy;
    return std::abs(lx) <= 0.5 * box.l && std::abs(ly) <= 0.5 * box.w;
  };
  std::size_t both = 0;
  std::size_t any = 0;
  for (std::size_t i = 0; i < samples; ++i) {
    const double x = rng.uniform(lo_x, hi_x);
    const double y = rng.uniform(lo_y, hi_y);
    const bool ia = inside(a, x, y);
    const bool ib = inside(b, x, y);
    both += ia && ib;
    any += ia || ib;
  }
  return any == 0 ? 0.0 : static_cast<double>(both) / static_cast<double>(any);
}

// ----------------------------------------------------------------------- NMS

/// Quadratic greedy NMS: repeatedly keep the best remaining proposal and
/// strike every remaining one overlapping it above the threshold.
inline std::vector<std::size_t> reference_nms(const std::vector<proposal::Proposal3D> & p,
                                              double iou_thr, double score_thr)
{
  auto iou = [](const proposal::MapBox & a, const proposal::MapBox & b) {
    const double iw = std::min(a.cx + a.w / 2, b.cx + b.w / 2) - std::max(a.cx - a.w / 2, b.cx - b.w / 2);
    const double ih = std::min(a.cy + a.h / 2, b.cy + b.h / 2) - std::max(a.cy - a.h / 2, b.cy - b.h / 2);
    if (iw <= 0 || ih <= 0) return 0.0;
    const double inter = iw * ih;
    return inter / (a.w * a.h + b.w * b.h - inter);
  };
  std::vector<bool> alive(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) alive[i] = p[i].confidence >= score_thr;
  std::vector<std::size_t> kept;
  while (true) {
    int best = -1;
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (alive[i] && (best < 0 || p[i].confidence > p[static_cast<std::size_t>(best)].confidence)) {
        best = static_cast<int>(i);
      }
    }
    if (best < 0) break;
    const auto bi = static_cast<std::size_t>(best);
    kept.push_back(bi);
    alive[bi] = false;
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (alive[i] && iou(p[bi].map_box(), p[i].map_box()) > iou_thr) alive[i] = false;
    }
  }
  return kept;
}

// ---------------------------------------------------------------- projection

/// Scans every row and column interval for the one containing the point's
/// angles; returns false when no interval does.
inline bool interval_scan_cell(const Point3 & p, const fvproj::ProjectionConfig & cfg, int & u, int & v)
{
  const double rho = std::hypot(p.x, p.y);
  const double theta = std::asin(p.z / std::sqrt(p.x * p.x + p.y * p.y + p.z * p.z));
  const double phi = std::asin(p.y / rho);
  u = -1;
  v = -1;
  for (int r = 0; r < cfg.height; ++r) {
    const double lo = cfg.theta_min + r * cfg.delta_theta;
    if (theta >= lo && theta < lo + cfg.delta_theta) u = r;
  }
  for (int c = 0; c < cfg.width; ++c) {
    const double lo = cfg.phi_min + c * cfg.delta_phi;
    if (phi >= lo && phi < lo + cfg.delta_phi) v = c;
  }
  return u >= 0 && v >= 0;
}

// ------------------------------------------------------------------------ AP

/// Straightforward evaluator: per sample, sort by score, match each
/// detection to the best free eligible ground truth; then sweep the global
/// ranking and take the 11-point interpolation by brute force over every
/// prefix.
struct ReferenceEval
{
  std::vector<std::pair<double, double>> pr;  // (recall, precision)
  double ap = 0.0;
  int num_gt = 0;
};

inline ReferenceEval reference_evaluate(const std::vector<eval::Detection> & dets,
                                        const std::vector<eval::GroundTruth> & gts, ClassId cls,
                                        eval::Bucket bucket, eval::IouKind kind, double thr)
{
  const auto spec = eval::difficulty_spec(bucket);
  ReferenceEval out;
  for (const auto & g : gts) {
    if (!g.dont_care && class_matches(g.cls, cls) && spec.admits(g)) ++out.num_gt;
  }
  struct Row
  {
    double score;
    int sample;
    std::size_t index;
    int kind;  // 1 tp, 0 fp, -1 ignored
  };
  std::vector<Row> rows;
  std::map<int, int> seen;
  for (const auto & d : dets) seen[d.sample] = 1;
  for (const auto & [sample, unused] : seen) {
    (void)unused;
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < dets.size(); ++i) {
      if (dets[i].sample == sample && class_matches(dets[i].cls, cls)) order.push_back(i);
    }
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return dets[a].score > dets[b].score; });
    std::vector<std::size_t> cand;
    for (std::size_t i = 0; i < gts.size(); ++i) {
      if (gts[i].sample == sample && !gts[i].dont_care && class_matches(gts[i].cls, cls)) cand.push_back(i);
    }
    std::vector<bool> taken(cand.size(), false);
    for (std::size_t d : order) {
      std::size_t pick = cand.size();
      double best = thr;
      for (std::size_t k = 0; k < cand.size(); ++k) {
        if (taken[k]) continue;
        const double o = eval::overlap(dets[d], gts[cand[k]], kind);
        if (o >= best && (pick == cand.size() || o > best)) {
          best = o;
          pick = k;
        }
      }
      int k = 0;
      if (pick < cand.size()) {
        taken[pick] = true;
        k = spec.admits(gts[cand[pick]]) ? 1 : -1;
      } else {
        for (const auto & g : gts) {
          if (g.sample == sample && g.dont_care && eval::overlap(dets[d], g, kind) >= thr) k = -1;
        }
      }
      rows.push_back({dets[d].score, sample, d, k});
    }
  }
  std::sort(rows.begin(), rows.end(), [](const Row & a, const Row & b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.sample != b.sample) return a.sample < b.sample;
    return a.index < b.index;
  });
  if (out.num_gt == 0) return out;
  int tp = 0;
  int fp = 0;
  for (const Row & r : rows) {
    if (r.kind < 0) continue;
    (r.kind == 1 ? tp : fp) += 1;
    out.pr.emplace_back(static_cast<double>(tp) / out.num_gt, static_cast<double>(tp) / (tp + fp));
  }
  double sum = 0.0;
  for (int level = 0; level <= 10; ++level) {
    double best = 0.0;
    for (const auto & [rec, prec] : out.pr) {
      if (rec * 10.0 >= level - 1e-9) best = std::max(best, prec);
    }
    sum += best;
  }
  out.ap = sum / 11.0;
  return out;
}

}  // namespace fvdet::test

#endif  // FVDET__TESTS__ORACLES_HPP_
