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


#include "fvdet/eval/iou.hpp"

#include <algorithm>
#include <cmath>

namespace fvdet::eval
{

namespace
{

constexpr double kAreaEps = 1e-12;

double cross(const Vec2 & o, const Vec2 & a, const Vec2 & b)
{
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

Vec2 intersect(const Vec2 & p, const Vec2 & q, const Vec2 & a, const Vec2 & b)
{
  // Point on segment pq where it crosses the infinite line ab.
  const double cp = cross(a, b, p);
  const double cq = cross(a, b, q);
  const double t = cp / (cp - cq);
  return {p.x + t * (q.x - p.x), p.y + t * (q.y - p.y)};
}

}  // namespace

std::array<Vec2, 4> footprint(const Box3D & box)
{
  const auto c = box_corners(box);
  return {{{c[0].x, c[0].y}, {c[1].x, c[1].y}, {c[2].x, c[2].y}, {c[3].x, c[3].y}}};
}

double polygon_area(const std::vector<Vec2> & poly)
{
  double s = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Vec2 & a = poly[i];
    const Vec2 & b = poly[(i + 1) % poly.size()];
    s += a.x * b.y - a.y * b.x;
  }
  return 0.5 * s;
}

std::vector<Vec2> clip_convex(const std::vector<Vec2> & subject, const std::vector<Vec2> & clip)
{
  std::vector<Vec2> out = subject;
  for (std::size_t e = 0; e < clip.size() && !out.empty(); ++e) {
    const Vec2 & a = clip[e];
    const Vec2 & b = clip[(e + 1) % clip.size()];
    std::vector<Vec2> in = std::move(out);
    out.clear();
    for (std::size_t i = 0; i < in.size(); ++i) {
      const Vec2 & p = in[i];
      const Vec2 & q = in[(i + 1) % in.size()];
      const bool p_in = cross(a, b, p) >= 0.0;
      const bool q_in = cross(a, b, q) >= 0.0;
      if (p_in) out.push_back(p);
      if (p_in != q_in) out.push_back(intersect(p, q, a, b));
    }
  }
  return out;
}

double bev_intersection_area(const Box3D & a, const Box3D & b)
{
  const auto fa = footprint(a);
  const auto fb = footprint(b);
  const std::vector<Vec2> pa(fa.begin(), fa.end());
  const std::vector<Vec2> pb(fb.begin(), fb.end());
  const auto poly = clip_convex(pa, pb);
  if (poly.size() < 3) return 0.0;
  const double area = std::abs(polygon_area(poly));
  return area < kAreaEps ? 0.0 : area;
}

double iou_bev(const Box3D & a, const Box3D & b)
{
  const double inter = bev_intersection_area(a, b);
  const double uni = a.l * a.w + b.l * b.w - inter;
  return uni > 0.0 ? std::clamp(inter / uni, 0.0, 1.0) : 0.0;
}

double iou_3d(const Box3D & a, const Box3D & b)
{
  const double lo = std::max(a.cz - 0.5 * a.h, b.cz - 0.5 * b.h);
  const double hi = std::min(a.cz + 0.5 * a.h, b.cz + 0.5 * b.h);
  const double dz = std::max(0.0, hi - lo);
  if (dz <= 0.0) return 0.0;
  const double inter = bev_intersection_area(a, b) * dz;
  const double uni = a.l * a.w * a.h + b.l * b.w * b.h - inter;
  return uni > 0.0 ? std::clamp(inter / uni, 0.0, 1.0) : 0.0;
}

double iou_2d_map(const proposal::MapBox & a, const proposal::MapBox & b)
{
  return proposal::iou_2d_axis_aligned(a, b);
}

}  // namespace fvdet::eval
