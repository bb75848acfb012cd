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

#include "fvdet/fvproj/projection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

namespace fvdet::fvproj
{

namespace
{

constexpr double kDeg = kPi / 180.0;

struct CellCandidate
{
  double radial = std::numeric_limits<double>::infinity();
  std::int64_t index = -1;

  bool better_than(const CellCandidate & o) const
  {
    if (index < 0) return false;
    if (o.index < 0) return true;
    if (radial != o.radial) return radial < o.radial;
    return index < o.index;
  }
};

void scan_range(const PointCloud & cloud, const ProjectionConfig & cfg, std::size_t begin,
                std::size_t end, std::vector<CellCandidate> & best, ProjectionStats & stats)
{
  for (std::size_t i = begin; i < end; ++i) {
    const Point3 & p = cloud.points[i];
    const ProjectResult r = project_point(p, cfg);
    if (r.status == ProjectStatus::kDegenerate) {
      ++stats.degenerate;
      continue;
    }
    if (!r.ok()) {
      ++stats.out_of_window;
      continue;
    }
    ++stats.projected;
    const CellCandidate cand{std::sqrt(p.x * p.x + p.y * p.y), static_cast<std::int64_t>(i)};
    auto & slot = best[static_cast<std::size_t>(r.pixel.u) * cfg.width + r.pixel.v];
    if (cand.better_than(slot)) {
      slot = cand;
    }
  }
}

}  // namespace

ProjectionConfig ProjectionConfig::kitti_default()
{
  ProjectionConfig cfg;
  cfg.height = 48;
  cfg.width = 192;
  cfg.theta_min = -24.8 * kDeg;
  cfg.delta_theta = (2.0 - (-24.8)) * kDeg / cfg.height;
  cfg.phi_min = -45.0 * kDeg;
  cfg.delta_phi = 90.0 * kDeg / cfg.width;
  cfg.upscaled_height = 128;
  cfg.upscaled_width = 512;
  cfg.max_radius = 80.0;
  cfg.fov_limit = 45.0 * kDeg;
  return cfg;
}

void ProjectionConfig::validate() const
{
  if (!(delta_theta > 0.0) || !(delta_phi > 0.0)) {
    throw std::invalid_argument("projection: angular cell sizes must be positive");
  }
  if (height <= 0 || width <= 0) {
    throw std::invalid_argument("projection: grid dimensions must be positive");
  }
  if (upscaled_height < height || upscaled_width < width) {
    throw std::invalid_argument("projection: upscaled grid smaller than the base grid");
  }
  if (!(max_radius > 0.0)) {
    throw std::invalid_argument("projection: maximum radial distance must be positive");
  }
  if (theta_min < -kPi / 2 || theta_max() > kPi / 2 + 1e-12 || phi_min < -kPi / 2 ||
      phi_max() > kPi / 2 + 1e-12) {
    throw std::invalid_argument("projection: angular window exceeds [-pi/2, pi/2]");
  }
  if (fov_limit && !(*fov_limit > 0.0)) {
    throw std::invalid_argument("projection: FOV limit must be positive");
  }
}

std::optional<Angles> angles_of_point(const Point3 & p)
{
  const double rho = std::sqrt(p.x * p.x + p.y * p.y);
  if (!(rho > 0.0)) {
    return std::nullopt;
  }
  const double range = std::sqrt(p.x * p.x + p.y * p.y + p.z * p.z);
  Angles a;
  a.theta = std::asin(std::clamp(p.z / range, -1.0, 1.0));
  a.phi = std::asin(std::clamp(p.y / rho, -1.0, 1.0));
  return a;
}

ProjectResult cell_of_angles(const Angles & a, const ProjectionConfig & cfg)
{
  const double fu = std::floor((a.theta - cfg.theta_min) / cfg.delta_theta);
  const double fv = std::floor((a.phi - cfg.phi_min) / cfg.delta_phi);
  if (fu < 0.0 || fv < 0.0 || fu >= cfg.height || fv >= cfg.width) {
    return {ProjectStatus::kOutOfWindow, {}};
  }
  return {ProjectStatus::kOk, {static_cast<int>(fu), static_cast<int>(fv)}};
}

ProjectResult project_point(const Point3 & p, const ProjectionConfig & cfg)
{
  const auto a = angles_of_point(p);
  if (!a) {
    return {ProjectStatus::kDegenerate, {}};
  }
  if (cfg.fov_limit && std::abs(std::atan2(p.y, p.x)) > *cfg.fov_limit) {
    return {ProjectStatus::kOutOfWindow, {}};
  }
  return cell_of_angles(*a, cfg);
}

FrontViewMap::FrontViewMap(int height, int width)
: height_(height),
  width_(width),
  data_(static_cast<std::size_t>(height) * width * kChannels, 0.0),
  occupancy_(static_cast<std::size_t>(height) * width, 0),
  provenance_(static_cast<std::size_t>(height) * width, -1)
{
  if (height < 0 || width < 0) {
    throw std::invalid_argument("FrontViewMap: negative dimensions");
  }
}

void FrontViewMap::set(int u, int v, double height, double radial, double intensity,
                       std::int64_t source)
{
  const std::size_t o = offset(u, v);
  data_[o + kHeight] = height;
  data_[o + kRadial] = radial;
  data_[o + kIntensity] = intensity;
  occupancy_[cell(u, v)] = 1;
  provenance_[cell(u, v)] = source;
}

void FrontViewMap::clear(int u, int v)
{
  const std::size_t o = offset(u, v);
  data_[o + kHeight] = 0.0;
  data_[o + kRadial] = 0.0;
  data_[o + kIntensity] = 0.0;
  occupancy_[cell(u, v)] = 0;
  provenance_[cell(u, v)] = -1;
}

std::size_t FrontViewMap::occupied_count() const
{
  return static_cast<std::size_t>(std::count(occupancy_.begin(), occupancy_.end(), 1));
}

ProjectionOutput build_front_view_map(const PointCloud & cloud, const ProjectionConfig & cfg,
                                      int threads)
{
  cfg.validate();
  const std::size_t cells = static_cast<std::size_t>(cfg.height) * cfg.width;
  const std::size_t n = cloud.size();
  const std::size_t workers =
    std::clamp<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), 1,
                            std::max<std::size_t>(n / 4096, 1));

  std::vector<std::vector<CellCandidate>> partial(workers, std::vector<CellCandidate>(cells));
  std::vector<ProjectionStats> stats(workers);
  if (workers == 1) {
    scan_range(cloud, cfg, 0, n, partial[0], stats[0]);
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t begin = std::min(n, w * chunk);
      const std::size_t end = std::min(n, begin + chunk);
      pool.emplace_back(scan_range, std::cref(cloud), std::cref(cfg), begin, end,
                        std::ref(partial[w]), std::ref(stats[w]));
    }
    for (auto & t : pool) {
      t.join();
    }
  }

  // (radial, index) order is total, so the merge is partition independent.
  std::vector<CellCandidate> & best = partial[0];
  for (std::size_t w = 1; w < workers; ++w) {
    for (std::size_t c = 0; c < cells; ++c) {
      if (partial[w][c].better_than(best[c])) {
        best[c] = partial[w][c];
      }
    }
  }

  ProjectionOutput out{FrontViewMap(cfg.height, cfg.width), {}};
  for (const auto & s : stats) {
    out.stats.projected += s.projected;
    out.stats.degenerate += s.degenerate;
    out.stats.out_of_window += s.out_of_window;
  }
  for (int u = 0; u < cfg.height; ++u) {
    for (int v = 0; v < cfg.width; ++v) {
      const CellCandidate & c = best[static_cast<std::size_t>(u) * cfg.width + v];
      if (c.index < 0) {
        continue;
      }
      const Point3 & p = cloud.points[static_cast<std::size_t>(c.index)];
      out.map.set(u, v, p.z, c.radial, p.intensity, c.index);
    }
  }
  return out;
}

FrontViewMap upscale_nearest(const FrontViewMap & map, int target_height, int target_width)
{
  if (target_height < map.height() || target_width < map.width()) {
    throw std::invalid_argument("upscale_nearest: target smaller than source");
  }
  FrontViewMap out(target_height, target_width);
  if (map.height() == 0 || map.width() == 0) {
    return out;
  }
  for (int u = 0; u < target_height; ++u) {
    const int su = static_cast<int>(static_cast<long long>(u) * map.height() / target_height);
    for (int v = 0; v < target_width; ++v) {
      const int sv = static_cast<int>(static_cast<long long>(v) * map.width() / target_width);
      if (!map.occupied(su, sv)) {
        continue;
      }
      out.set(u, v, map.channel(su, sv, FrontViewMap::kHeight),
              map.channel(su, sv, FrontViewMap::kRadial),
              map.channel(su, sv, FrontViewMap::kIntensity), map.provenance(su, sv));
    }
  }
  return out;
}

std::array<std::uint8_t, 3> RgbImage::at(int row, int col) const
{
  const std::size_t o = (static_cast<std::size_t>(row) * width + col) * 3;
  return {pixels[o], pixels[o + 1], pixels[o + 2]};
}

RgbImage render_map(const FrontViewMap & map)
{
  RgbImage img;
  img.width = map.width();
  img.height = map.height();
  img.pixels.assign(static_cast<std::size_t>(img.width) * img.height * 3, 0);

  std::array<double, 3> lo;
  std::array<double, 3> hi;
  lo.fill(std::numeric_limits<double>::infinity());
  hi.fill(-std::numeric_limits<double>::infinity());
  for (int u = 0; u < map.height(); ++u) {
    for (int v = 0; v < map.width(); ++v) {
      if (!map.occupied(u, v)) continue;
      for (int c = 0; c < 3; ++c) {
        lo[c] = std::min(lo[c], map.channel(u, v, c));
        hi[c] = std::max(hi[c], map.channel(u, v, c));
      }
    }
  }

  for (int u = 0; u < map.height(); ++u) {
    const int row = map.height() - 1 - u;
    for (int v = 0; v < map.width(); ++v) {
      if (!map.occupied(u, v)) continue;
      const std::size_t o = (static_cast<std::size_t>(row) * img.width + v) * 3;
      for (int c = 0; c < 3; ++c) {
        const double range = hi[c] - lo[c];
        const double t = range > 0.0 ? (map.channel(u, v, c) - lo[c]) / range : 1.0;
        img.pixels[o + c] = static_cast<std::uint8_t>(std::lround(255.0 * t));
      }
    }
  }
  return img;
}

}  // namespace fvdet::fvproj
