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


#include "fvdet/nnet/stage2_loss.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "fvdet/proposal/loss.hpp"

namespace fvdet::nnet
{

using proposal::huber;
using proposal::huber_grad;

std::vector<SizeTemplate> default_size_templates()
{
  return {{ClassId::kCar, 1.53, 1.63, 3.88},
          {ClassId::kPedestrian, 1.76, 0.66, 0.84},
          {ClassId::kCyclist, 1.74, 0.60, 1.76}};
}

std::vector<SizeTemplate> templates_from_boxes(const std::vector<std::pair<ClassId, Box3D>> & boxes)
{
  std::vector<SizeTemplate> out = default_size_templates();
  for (auto & t : out) {
    double h = 0.0;
    double w = 0.0;
    double l = 0.0;
    std::size_t n = 0;
    for (const auto & [cls, b] : boxes) {
      if (cls != t.cls) continue;
      h += b.h;
      w += b.w;
      l += b.l;
      ++n;
    }
    if (n > 0) {
      t.h = h / static_cast<double>(n);
      t.w = w / static_cast<double>(n);
      t.l = l / static_cast<double>(n);
    }
  }
  return out;
}

int nearest_template(const Box3D & box, const std::vector<SizeTemplate> & templates)
{
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < templates.size(); ++i) {
    const auto & t = templates[i];
    const double d = (box.h - t.h) * (box.h - t.h) + (box.w - t.w) * (box.w - t.w) +
                     (box.l - t.l) * (box.l - t.l);
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(i);
    }
  }
  return best;
}

std::vector<std::string> Stage2Loss::component_names()
{
  return {"center1", "center2", "size_cls", "size_reg", "heading_cls", "heading_reg", "corner"};
}

std::vector<double> Stage2Loss::components() const
{
  return {center1, center2, size_cls, size_reg, heading_cls, heading_reg, corner};
}

std::pair<int, double> heading_bin(double heading, int bins)
{
  const double width = kTwoPi / bins;
  const double a = normalize_angle(heading);
  int k = static_cast<int>(std::floor(a / width));
  k = std::clamp(k, 0, bins - 1);
  return {k, (a - (k + 0.5) * width) / (0.5 * width)};
}

double heading_from_bin(int bin, double residual, int bins)
{
  const double width = kTwoPi / bins;
  return (bin + 0.5) * width + residual * 0.5 * width;
}

std::vector<double> log_softmax(const double * logits, std::size_t n)
{
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) m = std::max(m, logits[i]);
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += std::exp(logits[i] - m);
  const double lse = m + std::log(s);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = logits[i] - lse;
  return out;
}

namespace
{

double corner_loss_one(const Box3D & pred, const Box3D & gt, double delta, CornerLossGrad * grad)
{
  const auto pc = box_corners(pred);
  const auto gc = box_corners(gt);
  const double c = std::cos(pred.heading);
  const double s = std::sin(pred.heading);
  double loss = 0.0;
  for (int i = 0; i < 8; ++i) {
    const auto & p = pc[static_cast<std::size_t>(i)];
    const auto & q = gc[static_cast<std::size_t>(i)];
    const double dx = p.x - q.x;
    const double dy = p.y - q.y;
    const double dz = p.z - q.z;
    const double d = std::sqrt(dx * dx + dy * dy + dz * dz);
    loss += huber(d, delta);
    if (!grad) continue;
    // d huber(|v|) / dv: v below delta, delta * v / |v| above.
    const double k = d <= delta ? 1.0 : delta / d;
    const double gx = k * dx / 8.0;
    const double gy = k * dy / 8.0;
    const double gz = k * dz / 8.0;
    const auto sign = corner_signs(i);
    const double lx = 0.5 * pred.l * sign[0];
    const double ly = 0.5 * pred.w * sign[1];
    grad->center[0] += gx;
    grad->center[1] += gy;
    grad->center[2] += gz;
    grad->l += (gx * c + gy * s) * 0.5 * sign[0];
    grad->w += (-gx * s + gy * c) * 0.5 * sign[1];
    grad->h += gz * 0.5 * sign[2];
    grad->heading += gx * (-s * lx - c * ly) + gy * (c * lx - s * ly);
  }
  return loss / 8.0;
}

}  // namespace

double corner_loss(const Box3D & pred, const Box3D & gt, double delta, CornerLossGrad * grad)
{
  Box3D flipped = gt;
  flipped.heading = gt.heading + kPi;
  CornerLossGrad g0;
  CornerLossGrad g1;
  const double l0 = corner_loss_one(pred, gt, delta, grad ? &g0 : nullptr);
  const double l1 = corner_loss_one(pred, flipped, delta, grad ? &g1 : nullptr);
  if (l1 < l0) {
    if (grad) *grad = g1;
    return l1;
  }
  if (grad) *grad = g0;
  return l0;
}

Stage2Loss stage2_loss(const PENetOutput & out, const Box3D & gt,
                       const std::vector<SizeTemplate> & templates, int heading_bins,
                       const Stage2Weights & weights, bool with_grad)
{
  const int ns = static_cast<int>(templates.size());
  const int nh = heading_bins;
  const std::size_t dim = static_cast<std::size_t>(3 + 4 * ns + 2 * nh);
  if (out.params.size() != dim) {
    throw std::invalid_argument("stage2_loss: output length does not match templates and bins");
  }
  const double delta = weights.huber_delta;
  const double * o = out.params.data();
  const std::size_t size_score = 3;
  const std::size_t size_res = 3 + static_cast<std::size_t>(ns);
  const std::size_t head_score = 3 + 4 * static_cast<std::size_t>(ns);
  const std::size_t head_res = head_score + static_cast<std::size_t>(nh);

  Stage2Loss r;
  if (with_grad) r.grad_params.assign(dim, 0.0);
  const std::array<double, 3> gtc{gt.cx, gt.cy, gt.cz};

  // Center: T-Net estimate, then T-Net plus residual.
  std::array<double, 3> center{};
  for (std::size_t k = 0; k < 3; ++k) {
    const double e1 = out.offset[k] - gtc[k];
    center[k] = out.offset[k] + o[k];
    const double e2 = center[k] - gtc[k];
    r.center1 += huber(e1, delta);
    r.center2 += huber(e2, delta);
    if (with_grad) {
      r.grad_offset[k] += weights.center1 * huber_grad(e1, delta) +
                          weights.center2 * huber_grad(e2, delta);
      r.grad_params[k] += weights.center2 * huber_grad(e2, delta);
    }
  }

  // Size: template classification plus normalized residual.
  const int s = nearest_template(gt, templates);
  const auto & t = templates[static_cast<std::size_t>(s)];
  const auto ls = log_softmax(o + size_score, static_cast<std::size_t>(ns));
  r.size_cls = -ls[static_cast<std::size_t>(s)];
  const std::array<double, 3> tdim{t.h, t.w, t.l};
  const std::array<double, 3> gdim{gt.h, gt.w, gt.l};
  const std::size_t res_base = size_res + 3 * static_cast<std::size_t>(s);
  for (std::size_t k = 0; k < 3; ++k) {
    const double e = o[res_base + k] - (gdim[k] - tdim[k]) / tdim[k];
    r.size_reg += huber(e, delta);
    if (with_grad) r.grad_params[res_base + k] += weights.size_reg * huber_grad(e, delta);
  }

  // Heading: bin classification plus residual inside the bin.
  const auto [hb, hres] = heading_bin(gt.heading, nh);
  const auto lh = log_softmax(o + head_score, static_cast<std::size_t>(nh));
  r.heading_cls = -lh[static_cast<std::size_t>(hb)];
  const double eh = o[head_res + static_cast<std::size_t>(hb)] - hres;
  r.heading_reg = huber(eh, delta);

  if (with_grad) {
    for (int i = 0; i < ns; ++i) {
      const double p = std::exp(ls[static_cast<std::size_t>(i)]);
      r.grad_params[size_score + static_cast<std::size_t>(i)] +=
        weights.size_cls * (p - (i == s ? 1.0 : 0.0));
    }
    for (int i = 0; i < nh; ++i) {
      const double p = std::exp(lh[static_cast<std::size_t>(i)]);
      r.grad_params[head_score + static_cast<std::size_t>(i)] +=
        weights.heading_cls * (p - (i == hb ? 1.0 : 0.0));
    }
    r.grad_params[head_res + static_cast<std::size_t>(hb)] +=
      weights.heading_reg * huber_grad(eh, delta);
  }

  // Corner loss on the box assembled from the target template and bin.
  Box3D pred;
  pred.cx = center[0];
  pred.cy = center[1];
  pred.cz = center[2];
  pred.h = t.h * (1.0 + o[res_base + 0]);
  pred.w = t.w * (1.0 + o[res_base + 1]);
  pred.l = t.l * (1.0 + o[res_base + 2]);
  pred.heading = heading_from_bin(hb, o[head_res + static_cast<std::size_t>(hb)], nh);
  CornerLossGrad cg;
  r.corner = corner_loss(pred, gt, delta, with_grad ? &cg : nullptr);
  if (with_grad) {
    const double wc = weights.corner;
    for (std::size_t k = 0; k < 3; ++k) {
      r.grad_offset[k] += wc * cg.center[k];
      r.grad_params[k] += wc * cg.center[k];
    }
    r.grad_params[res_base + 0] += wc * cg.h * t.h;
    r.grad_params[res_base + 1] += wc * cg.w * t.w;
    r.grad_params[res_base + 2] += wc * cg.l * t.l;
    r.grad_params[head_res + static_cast<std::size_t>(hb)] += wc * cg.heading * (kPi / nh);
  }

  r.total = weights.center1 * r.center1 + weights.center2 * r.center2 +
            weights.size_cls * r.size_cls + weights.size_reg * r.size_reg +
            weights.heading_cls * r.heading_cls + weights.heading_reg * r.heading_reg +
            weights.corner * r.corner;
  return r;
}

DecodedBox decode_box(const PENetOutput & out, const std::vector<SizeTemplate> & templates,
                      int heading_bins)
{
  const int ns = static_cast<int>(templates.size());
  const int nh = heading_bins;
  if (out.params.size() != static_cast<std::size_t>(3 + 4 * ns + 2 * nh)) {
    throw std::invalid_argument("decode_box: output length does not match templates and bins");
  }
  const double * o = out.params.data();
  const double * ss = o + 3;
  const double * sr = o + 3 + ns;
  const double * hs = o + 3 + 4 * ns;
  const double * hr = hs + nh;
  const int s = static_cast<int>(std::max_element(ss, ss + ns) - ss);
  const int h = static_cast<int>(std::max_element(hs, hs + nh) - hs);
  const auto & t = templates[static_cast<std::size_t>(s)];
  DecodedBox d;
  d.size_class = s;
  d.heading_bin = h;
  d.size_score = std::exp(log_softmax(ss, static_cast<std::size_t>(ns))[static_cast<std::size_t>(s)]);
  d.box.cx = out.offset[0] + o[0];
  d.box.cy = out.offset[1] + o[1];
  d.box.cz = out.offset[2] + o[2];
  d.box.h = std::max(t.h * (1.0 + sr[3 * s + 0]), 1e-3);
  d.box.w = std::max(t.w * (1.0 + sr[3 * s + 1]), 1e-3);
  d.box.l = std::max(t.l * (1.0 + sr[3 * s + 2]), 1e-3);
  d.box.heading = normalize_angle(heading_from_bin(h, hr[h], nh));
  return d;
}

}  // namespace fvdet::nnet
