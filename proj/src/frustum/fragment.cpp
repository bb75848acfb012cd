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


#include "fvdet/frustum/fragment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fvdet::frustum
{

CylinderFragment make_fragment(const proposal::MapBox & box, double r1, double r2,
                               const fvproj::ProjectionConfig & cfg,
                               const FragmentMargins & margins)
{
  if (!std::isfinite(box.cx) || !std::isfinite(box.cy) || !std::isfinite(box.w) ||
      !std::isfinite(box.h) || !std::isfinite(r1) || !std::isfinite(r2)) {
    throw std::invalid_argument("make_fragment: non-finite input");
  }
  if (!(box.w > 0.0) || !(box.h > 0.0)) {
    throw std::invalid_argument("make_fragment: empty map box");
  }
  CylinderFragment f;
  f.box = {box.cx, box.cy, box.w * margins.box_scale, box.h * margins.box_scale};
  const double lo = std::min(r1, r2) - margins.radial;
  const double hi = std::max(r1, r2) + margins.radial;
  f.r1 = std::clamp(lo, 0.0, cfg.max_radius);
  f.r2 = std::clamp(hi, 0.0, cfg.max_radius);
  return f;
}

CylinderFragment fragment_from_proposal(const proposal::Proposal3D & p,
                                        const fvproj::ProjectionConfig & cfg,
                                        const FragmentMargins & margins)
{
  return make_fragment(p.map_box(), p.r1, p.r2, cfg, margins);
}

namespace
{

// Closest footprint point to the sensor axis, in the box frame.
Point3 closest_footprint_point(const Box3D & box)
{
  const double c = std::cos(box.heading);
  const double s = std::sin(box.heading);
  const double lx = -(c * box.cx + s * box.cy);
  const double ly = -(-s * box.cx + c * box.cy);
  const double qx = std::clamp(lx, -0.5 * box.l, 0.5 * box.l);
  const double qy = std::clamp(ly, -0.5 * box.w, 0.5 * box.w);
  return {box.cx + c * qx - s * qy, box.cy + s * qx + c * qy, 0.0, 0.0};
}

}  // namespace

std::pair<double, double> radial_extent(const Box3D & box)
{
  const Point3 q = closest_footprint_point(box);
  const double rmin = std::sqrt(q.x * q.x + q.y * q.y);
  double rmax = 0.0;
  for (const Point3 & p : box_corners(box)) {
    rmax = std::max(rmax, std::sqrt(p.x * p.x + p.y * p.y));
  }
  return {rmin, rmax};
}

proposal::MapBox map_box_of(const Box3D & box, const fvproj::ProjectionConfig & cfg)
{
  // Elevation extremes sit on the top/bottom edges (at the point nearest the
  // sensor when it lies inside an edge); azimuth extremes sit on corners.
  constexpr int kSubdiv = 32;
  const auto corners = box_corners(box);
  static constexpr int kEdges[12][2] = {{0, 1}, {1, 2}, {2, 3}, {3, 0}, {4, 5}, {5, 6},
                                        {6, 7}, {7, 4}, {0, 4}, {1, 5}, {2, 6}, {3, 7}};
  double tmin = std::numeric_limits<double>::infinity();
  double tmax = -tmin;
  double pmin = tmin;
  double pmax = -tmin;
  auto visit = [&](const Point3 & p) {
    const auto a = fvproj::angles_of_point(p);
    if (!a) return;
    tmin = std::min(tmin, a->theta);
    tmax = std::max(tmax, a->theta);
    pmin = std::min(pmin, a->phi);
    pmax = std::max(pmax, a->phi);
  };
  for (const auto & e : kEdges) {
    const Point3 & a = corners[static_cast<std::size_t>(e[0])];
    const Point3 & b = corners[static_cast<std::size_t>(e[1])];
    for (int i = 0; i <= kSubdiv; ++i) {
      const double t = static_cast<double>(i) / kSubdiv;
      visit({a.x + t * (b.x - a.x), a.y + t * (b.y - a.y), a.z + t * (b.z - a.z), 0.0});
    }
  }
  Point3 q = closest_footprint_point(box);
  q.z = box.cz - 0.5 * box.h;
  visit(q);
  q.z = box.cz + 0.5 * box.h;
  visit(q);

  const double col_lo = (pmin - cfg.phi_min) / cfg.delta_phi * cfg.col_scale();
  const double col_hi = (pmax - cfg.phi_min) / cfg.delta_phi * cfg.col_scale();
  const double row_lo = (tmin - cfg.theta_min) / cfg.delta_theta * cfg.row_scale();
  const double row_hi = (tmax - cfg.theta_min) / cfg.delta_theta * cfg.row_scale();
  return {0.5 * (col_lo + col_hi), 0.5 * (row_lo + row_hi), col_hi - col_lo, row_hi - row_lo};
}

proposal::GroundTruthProposal ground_truth_proposal(const Box3D & box, ClassId cls,
                                                    const fvproj::ProjectionConfig & cfg)
{
  const auto [rmin, rmax] = radial_extent(box);
  return {map_box_of(box, cfg), rmin, rmax, stage1_class(cls)};
}

CylinderFragment fragment_from_box(const Box3D & box, const fvproj::ProjectionConfig & cfg,
                                   const FragmentMargins & margins)
{
  const auto gt = ground_truth_proposal(box, ClassId::kCar, cfg);
  return make_fragment(gt.box, gt.r1, gt.r2, cfg, margins);
}

double fragment_azimuth(const CylinderFragment & frag, const fvproj::ProjectionConfig & cfg)
{
  const double phi = cfg.phi_min + frag.box.cx / cfg.col_scale() * cfg.delta_phi;
  if (!std::isfinite(phi) || std::abs(phi) >= 0.5 * kPi) {
    throw std::domain_error("fragment_azimuth: fragment center azimuth undefined");
  }
  return phi;
}

}  // namespace fvdet::frustum
