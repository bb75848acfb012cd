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


#include "fvdet/kittio/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <stdexcept>

#include "fvdet/core/rng.hpp"
#include "fvdet/eval/iou.hpp"
#include "fvdet/frustum/fragment.hpp"

namespace fvdet::kittio
{

using nlohmann::json;

namespace
{

constexpr double kInset = 1.0 - 1e-6;

json size_json(const SizeDistribution & s)
{
  return {{"h", s.h}, {"w", s.w}, {"l", s.l},
          {"sigma_h", s.sigma_h}, {"sigma_w", s.sigma_w}, {"sigma_l", s.sigma_l}};
}

void read_size(const json & j, SizeDistribution & s)
{
  for (const auto & [k, v] : j.items()) {
    if (k == "h") s.h = v.get<double>();
    else if (k == "w") s.w = v.get<double>();
    else if (k == "l") s.l = v.get<double>();
    else if (k == "sigma_h") s.sigma_h = v.get<double>();
    else if (k == "sigma_w") s.sigma_w = v.get<double>();
    else if (k == "sigma_l") s.sigma_l = v.get<double>();
    else throw std::runtime_error("scene spec: unknown size key '" + k + "'");
  }
}

double draw(Rng & rng, double mean, double sigma)
{
  if (sigma <= 0.0) return mean;
  return mean + sigma * std::clamp(rng.normal(), -2.0, 2.0);
}

/// Azimuth interval [lo, hi] covered by a box footprint.
std::pair<double, double> azimuth_interval(const Box3D & box)
{
  double lo = kPi;
  double hi = -kPi;
  for (const auto & c : box_corners(box)) {
    const double a = std::atan2(c.y, c.x);
    lo = std::min(lo, a);
    hi = std::max(hi, a);
  }
  return {lo, hi};
}

void sample_surface(const Box3D & box, int count, Rng & rng, std::vector<Point3> & out)
{
  // Faces: +l, -l (area w*h), +w, -w (area l*h), top (area l*w).
  const double areas[5] = {box.w * box.h, box.w * box.h, box.l * box.h, box.l * box.h,
                           box.l * box.w};
  double total = 0.0;
  for (double a : areas) total += a;
  const double c = std::cos(box.heading);
  const double s = std::sin(box.heading);
  const double intensity = rng.uniform(0.2, 0.7);
  for (int i = 0; i < count; ++i) {
    double pick = rng.uniform() * total;
    int face = 0;
    while (face < 4 && pick >= areas[face]) {
      pick -= areas[face];
      ++face;
    }
    const double a = rng.uniform(-0.5, 0.5) * kInset;
    const double b = rng.uniform(-0.5, 0.5) * kInset;
    double lx = 0.0;
    double ly = 0.0;
    double lz = 0.0;
    const double half = 0.5 * kInset;
    switch (face) {
      case 0: lx = half * box.l; ly = a * box.w; lz = b * box.h; break;
      case 1: lx = -half * box.l; ly = a * box.w; lz = b * box.h; break;
      case 2: lx = a * box.l; ly = half * box.w; lz = b * box.h; break;
      case 3: lx = a * box.l; ly = -half * box.w; lz = b * box.h; break;
      default: lx = a * box.l; ly = b * box.w; lz = half * box.h; break;
    }
    out.push_back({box.cx + c * lx - s * ly, box.cy + s * lx + c * ly, box.cz + lz,
                   std::clamp(intensity + rng.uniform(-0.05, 0.05), 0.0, 1.0)});
  }
}

}  // namespace

std::string scene_spec_to_json(const SceneSpec & s)
{
  const json j = {{"cars", s.cars},
                  {"pedestrians", s.pedestrians},
                  {"cyclists", s.cyclists},
                  {"radial_min", s.radial_min},
                  {"radial_max", s.radial_max},
                  {"azimuth_limit_deg", s.azimuth_limit * 180.0 / kPi},
                  {"car", size_json(s.car)},
                  {"pedestrian", size_json(s.pedestrian)},
                  {"cyclist", size_json(s.cyclist)},
                  {"points_at_10m", s.points_at_10m},
                  {"min_points", s.min_points},
                  {"clutter_points", s.clutter_points},
                  {"clutter_azimuth_deg", s.clutter_azimuth * 180.0 / kPi},
                  {"clutter_radial_min", s.clutter_radial_min},
                  {"clutter_radial_max", s.clutter_radial_max},
                  {"ground_z", s.ground_z},
                  {"avoid_occlusion", s.avoid_occlusion},
                  {"max_retries", s.max_retries},
                  {"seed", s.seed}};
  return j.dump(2) + "\n";
}

SceneSpec scene_spec_from_json(const std::string & text)
{
  SceneSpec s;
  try {
    const json j = json::parse(text);
    for (const auto & [k, v] : j.items()) {
      if (k == "cars") s.cars = v.get<int>();
      else if (k == "pedestrians") s.pedestrians = v.get<int>();
      else if (k == "cyclists") s.cyclists = v.get<int>();
      else if (k == "radial_min") s.radial_min = v.get<double>();
      else if (k == "radial_max") s.radial_max = v.get<double>();
      else if (k == "azimuth_limit_deg") s.azimuth_limit = v.get<double>() * kPi / 180.0;
      else if (k == "car") read_size(v, s.car);
      else if (k == "pedestrian") read_size(v, s.pedestrian);
      else if (k == "cyclist") read_size(v, s.cyclist);
      else if (k == "points_at_10m") s.points_at_10m = v.get<double>();
      else if (k == "min_points") s.min_points = v.get<int>();
      else if (k == "clutter_points") s.clutter_points = v.get<int>();
      else if (k == "clutter_azimuth_deg") s.clutter_azimuth = v.get<double>() * kPi / 180.0;
      else if (k == "clutter_radial_min") s.clutter_radial_min = v.get<double>();
      else if (k == "clutter_radial_max") s.clutter_radial_max = v.get<double>();
      else if (k == "ground_z") s.ground_z = v.get<double>();
      else if (k == "avoid_occlusion") s.avoid_occlusion = v.get<bool>();
      else if (k == "max_retries") s.max_retries = v.get<int>();
      else if (k == "seed") s.seed = v.get<std::uint64_t>();
      else throw std::runtime_error("scene spec: unknown key '" + k + "'");
    }
  } catch (const json::exception & e) {
    throw std::runtime_error(std::string("scene spec: ") + e.what());
  }
  return s;
}

Scene gen_synthetic_scene(const SceneSpec & spec, const fvproj::ProjectionConfig & cfg)
{
  if (spec.cars < 0 || spec.pedestrians < 0 || spec.cyclists < 0 || spec.min_points < 0 ||
      spec.clutter_points < 0 || !(spec.radial_min > 0.0) || spec.radial_max < spec.radial_min) {
    throw std::invalid_argument("gen_synthetic_scene: invalid scene spec");
  }
  Rng rng(spec.seed);
  Scene scene;
  std::vector<ClassId> classes;
  classes.insert(classes.end(), static_cast<std::size_t>(spec.cars), ClassId::kCar);
  classes.insert(classes.end(), static_cast<std::size_t>(spec.pedestrians), ClassId::kPedestrian);
  classes.insert(classes.end(), static_cast<std::size_t>(spec.cyclists), ClassId::kCyclist);

  std::vector<std::pair<double, double>> taken_azimuth;
  for (ClassId cls : classes) {
    const SizeDistribution & sd = cls == ClassId::kCar          ? spec.car
                                  : cls == ClassId::kPedestrian ? spec.pedestrian
                                                                : spec.cyclist;
    bool placed = false;
    for (int attempt = 0; attempt < spec.max_retries && !placed; ++attempt) {
      Box3D b;
      b.h = std::max(draw(rng, sd.h, sd.sigma_h), 0.2);
      b.w = std::max(draw(rng, sd.w, sd.sigma_w), 0.2);
      b.l = std::max(draw(rng, sd.l, sd.sigma_l), 0.2);
      const double r = rng.uniform(spec.radial_min, spec.radial_max);
      const double az = rng.uniform(-spec.azimuth_limit, spec.azimuth_limit);
      b.cx = r * std::cos(az);
      b.cy = r * std::sin(az);
      b.cz = spec.ground_z + 0.5 * b.h;
      b.heading = rng.uniform(0.0, kTwoPi);

      const auto [lo, hi] = azimuth_interval(b);
      bool ok = std::abs(lo) < cfg.phi_max() && std::abs(hi) < cfg.phi_max();
      const auto [rmin, rmax] = frustum::radial_extent(b);
      ok = ok && rmin >= 0.5 * spec.radial_min && rmax <= cfg.max_radius;
      for (const auto & o : scene.objects) {
        if (!ok) break;
        if (eval::bev_intersection_area(b, o.box) > 0.0) ok = false;
        // Keep a clearance so that crops do not share points.
        const double d = std::hypot(b.cx - o.box.cx, b.cy - o.box.cy);
        if (d < 0.5 * (std::hypot(b.l, b.w) + std::hypot(o.box.l, o.box.w)) + 0.5) ok = false;
      }
      if (ok && spec.avoid_occlusion) {
        for (const auto & [tlo, thi] : taken_azimuth) {
          if (lo < thi + 0.02 && tlo < hi + 0.02) {
            ok = false;
            break;
          }
        }
      }
      if (!ok) continue;
      // The whole box must sit inside the elevation window.
      const auto mb = frustum::map_box_of(b, cfg);
      if (mb.top() < 0.0 || mb.bottom() > cfg.upscaled_height) continue;
      scene.objects.push_back({b, cls});
      taken_azimuth.emplace_back(lo, hi);
      placed = true;
    }
    if (!placed) {
      throw std::runtime_error("gen_synthetic_scene: could not place object " +
                               std::to_string(scene.objects.size()) + " without overlap after " +
                               std::to_string(spec.max_retries) + " attempts");
    }
  }

  for (const auto & o : scene.objects) {
    const double d = std::hypot(o.box.cx, o.box.cy);
    const int n = std::max(spec.min_points,
                           static_cast<int>(std::lround(spec.points_at_10m * 100.0 / (d * d))));
    sample_surface(o.box, n, rng, scene.cloud.points);
  }

  // Ground returns: uniform in area over the sector, skipping box footprints.
  const double r0 = spec.clutter_radial_min;
  const double r1 = spec.clutter_radial_max;
  for (int i = 0; i < spec.clutter_points; ++i) {
    const double r = std::sqrt(rng.uniform(r0 * r0, r1 * r1));
    const double az = rng.uniform(-spec.clutter_azimuth, spec.clutter_azimuth);
    const Point3 p{r * std::cos(az), r * std::sin(az), spec.ground_z + rng.uniform(-0.02, 0.0),
                   rng.uniform(0.0, 0.3)};
    bool inside = false;
    for (const auto & o : scene.objects) {
      Box3D grown = o.box;
      grown.l += 0.2;
      grown.w += 0.2;
      grown.h += 0.2;
      if (point_in_box(p, grown)) {
        inside = true;
        break;
      }
    }
    if (!inside) scene.cloud.points.push_back(p);
  }
  return scene;
}

std::vector<LabeledObject> scene_labels(const Scene & scene, const fvproj::ProjectionConfig & cfg)
{
  std::vector<LabeledObject> out;
  for (const auto & o : scene.objects) {
    LabeledObject l;
    l.type = std::string(class_name(o.cls));
    l.cls = o.cls;
    l.box = o.box;
    l.map_box = frustum::map_box_of(o.box, cfg);
    out.push_back(l);
  }
  return out;
}

}  // namespace fvdet::kittio
