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


#include "fvdet/frustum/point_set.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fvdet/core/binary_io.hpp"

namespace fvdet::frustum
{

ProjectedCloud project_cloud(const PointCloud & cloud, const fvproj::ProjectionConfig & cfg)
{
  ProjectedCloud out;
  out.cloud = &cloud;
  out.pixels.resize(cloud.size());
  out.valid.resize(cloud.size(), 0);
  out.radial.resize(cloud.size(), 0.0);
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const Point3 & p = cloud.points[i];
    const auto r = fvproj::project_point(p, cfg);
    out.valid[i] = r.ok() ? 1 : 0;
    out.pixels[i] = r.pixel;
    out.radial[i] = std::sqrt(p.x * p.x + p.y * p.y);
  }
  // Counting sort by cell keeps indices ascending inside every cell.
  const std::size_t cells = static_cast<std::size_t>(cfg.height) * cfg.width;
  out.width = cfg.width;
  out.cell_start.assign(cells + 1, 0);
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    if (!out.valid[i]) continue;
    ++out.cell_start[static_cast<std::size_t>(out.pixels[i].u) * cfg.width + out.pixels[i].v + 1];
  }
  for (std::size_t c = 0; c < cells; ++c) out.cell_start[c + 1] += out.cell_start[c];
  out.cell_points.resize(out.cell_start[cells]);
  std::vector<std::size_t> fill(out.cell_start.begin(), out.cell_start.end() - 1);
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    if (!out.valid[i]) continue;
    out.cell_points[fill[static_cast<std::size_t>(out.pixels[i].u) * cfg.width + out.pixels[i].v]++] = i;
  }
  return out;
}

CellRange cell_range(const CylinderFragment & frag, const fvproj::ProjectionConfig & cfg)
{
  CellRange r;
  r.col_lo = static_cast<int>(std::floor(frag.box.left() / cfg.col_scale()));
  r.col_hi = static_cast<int>(std::floor(frag.box.right() / cfg.col_scale()));
  r.row_lo = static_cast<int>(std::floor(frag.box.top() / cfg.row_scale()));
  r.row_hi = static_cast<int>(std::floor(frag.box.bottom() / cfg.row_scale()));
  return r;
}

ObjectPointSet extrude_points(const ProjectedCloud & projected, const CylinderFragment & frag,
                              const fvproj::ProjectionConfig & cfg)
{
  const CellRange range = cell_range(frag, cfg);
  ObjectPointSet out;
  const PointCloud & cloud = *projected.cloud;
  if (projected.width != cfg.width ||
      projected.cell_start.size() != static_cast<std::size_t>(cfg.height) * cfg.width + 1) {
    throw std::invalid_argument("extrude_points: projection cache built for another grid");
  }
  const int row_lo = std::max(range.row_lo, 0);
  const int row_hi = std::min(range.row_hi, cfg.height - 1);
  const int col_lo = std::max(range.col_lo, 0);
  const int col_hi = std::min(range.col_hi, cfg.width - 1);
  for (int u = row_lo; u <= row_hi; ++u) {
    for (int v = col_lo; v <= col_hi; ++v) {
      const std::size_t c = static_cast<std::size_t>(u) * cfg.width + v;
      for (std::size_t k = projected.cell_start[c]; k < projected.cell_start[c + 1]; ++k) {
        const std::size_t i = projected.cell_points[k];
        const double r = projected.radial[i];
        if (r < frag.r1 || r > frag.r2) continue;
        out.source_indices.push_back(i);
      }
    }
  }
  std::sort(out.source_indices.begin(), out.source_indices.end());
  out.points.reserve(out.source_indices.size());
  for (std::size_t i : out.source_indices) out.points.push_back(cloud.points[i]);
  return out;
}

ObjectPointSet extrude_points(const PointCloud & cloud, const CylinderFragment & frag,
                              const fvproj::ProjectionConfig & cfg)
{
  return extrude_points(project_cloud(cloud, cfg), frag, cfg);
}

Box3D box_to_canonical(const Box3D & box, double azimuth)
{
  const Point3 c = rotate_about_z({box.cx, box.cy, box.cz, 0.0}, -azimuth);
  return {c.x, c.y, c.z, box.h, box.w, box.l, normalize_angle(box.heading - azimuth)};
}

Box3D box_from_canonical(const Box3D & box, double azimuth)
{
  const Point3 c = rotate_about_z({box.cx, box.cy, box.cz, 0.0}, azimuth);
  return {c.x, c.y, c.z, box.h, box.w, box.l, normalize_angle(box.heading + azimuth)};
}

ObjectPointSet to_canonical(const ObjectPointSet & pts, const CylinderFragment & frag,
                            const fvproj::ProjectionConfig & cfg)
{
  if (pts.frame != Frame::kSensor) {
    throw std::invalid_argument("to_canonical: points must be in the sensor frame");
  }
  const double azimuth = fragment_azimuth(frag, cfg);
  ObjectPointSet out = pts;
  for (auto & p : out.points) {
    p = rotate_about_z(p, -azimuth);
  }
  out.frame = Frame::kCanonical;
  out.canonical_rotation = azimuth;
  return out;
}

ObjectPointSet from_canonical(const ObjectPointSet & pts)
{
  if (pts.frame != Frame::kCanonical) {
    throw std::invalid_argument("from_canonical: points must be in the canonical frame");
  }
  ObjectPointSet out = pts;
  for (auto & p : out.points) {
    p = rotate_about_z(p, pts.canonical_rotation);
  }
  out.frame = Frame::kSensor;
  out.canonical_rotation = 0.0;
  return out;
}

ObjectPointSet normalize_centroid(const ObjectPointSet & pts)
{
  if (pts.points.empty()) {
    throw std::invalid_argument("normalize_centroid: empty point set");
  }
  if (pts.frame == Frame::kNormalized) {
    throw std::invalid_argument("normalize_centroid: already normalized");
  }
  double sx = 0.0;
  double sy = 0.0;
  double sz = 0.0;
  for (const auto & p : pts.points) {
    sx += p.x;
    sy += p.y;
    sz += p.z;
  }
  const double n = static_cast<double>(pts.points.size());
  const std::array<double, 3> mean = {sx / n, sy / n, sz / n};
  ObjectPointSet out = pts;
  for (auto & p : out.points) {
    p.x -= mean[0];
    p.y -= mean[1];
    p.z -= mean[2];
  }
  out.frame = Frame::kNormalized;
  out.centroid_offset = mean;
  return out;
}

ObjectPointSet denormalize_centroid(const ObjectPointSet & pts)
{
  if (pts.frame != Frame::kNormalized || !pts.centroid_offset) {
    throw std::invalid_argument("denormalize_centroid: point set is not normalized");
  }
  ObjectPointSet out = pts;
  const auto & m = *pts.centroid_offset;
  for (auto & p : out.points) {
    p.x += m[0];
    p.y += m[1];
    p.z += m[2];
  }
  out.frame = Frame::kCanonical;
  out.centroid_offset.reset();
  return out;
}

ObjectPointSet sample_points(const ObjectPointSet & pts, std::size_t count, Rng & rng)
{
  if (pts.points.empty()) {
    throw std::invalid_argument("sample_points: empty point set");
  }
  ObjectPointSet out = pts;
  out.points.clear();
  out.source_indices.clear();
  out.points.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t k = rng.index(pts.points.size());
    out.points.push_back(pts.points[k]);
    if (k < pts.source_indices.size()) {
      out.source_indices.push_back(pts.source_indices[k]);
    }
  }
  return out;
}

std::vector<char> serialize_point_set(const ObjectPointSet & pts)
{
  std::vector<char> buf;
  buf.reserve(32 + 16 * pts.points.size());
  io::put_u32(buf, kPointSetMagic);
  io::put_u32(buf, static_cast<std::uint32_t>(pts.points.size()));
  io::put_u32(buf, static_cast<std::uint32_t>(pts.frame));
  io::put_u32(buf, pts.centroid_offset ? 1u : 0u);
  const std::array<double, 3> off = pts.centroid_offset.value_or(std::array<double, 3>{});
  io::put_f32(buf, static_cast<float>(off[0]));
  io::put_f32(buf, static_cast<float>(off[1]));
  io::put_f32(buf, static_cast<float>(off[2]));
  io::put_f32(buf, static_cast<float>(pts.canonical_rotation));
  for (const auto & p : pts.points) {
    io::put_f32(buf, static_cast<float>(p.x));
    io::put_f32(buf, static_cast<float>(p.y));
    io::put_f32(buf, static_cast<float>(p.z));
    io::put_f32(buf, static_cast<float>(p.intensity));
  }
  return buf;
}

ObjectPointSet deserialize_point_set(const std::vector<char> & bytes)
{
  if (bytes.size() < 32) {
    throw std::runtime_error("point set: truncated header");
  }
  const char * d = bytes.data();
  if (io::get_u32(d) != kPointSetMagic) {
    throw std::runtime_error("point set: bad magic");
  }
  const std::uint32_t count = io::get_u32(d + 4);
  const std::uint32_t frame = io::get_u32(d + 8);
  const std::uint32_t flags = io::get_u32(d + 12);
  if (frame > 2) {
    throw std::runtime_error("point set: unknown frame tag");
  }
  if (bytes.size() != 32 + static_cast<std::size_t>(count) * 16) {
    throw std::runtime_error("point set: size does not match count");
  }
  ObjectPointSet out;
  out.frame = static_cast<Frame>(frame);
  if (flags & 1u) {
    out.centroid_offset = std::array<double, 3>{io::get_f32(d + 16), io::get_f32(d + 20),
                                                io::get_f32(d + 24)};
  }
  out.canonical_rotation = io::get_f32(d + 28);
  out.points.reserve(count);
  const char * p = d + 32;
  for (std::uint32_t i = 0; i < count; ++i, p += 16) {
    out.points.push_back({io::get_f32(p), io::get_f32(p + 4), io::get_f32(p + 8), io::get_f32(p + 12)});
  }
  return out;
}

void write_point_set(const ObjectPointSet & pts, const std::filesystem::path & path)
{
  io::write_file(path, serialize_point_set(pts));
}

ObjectPointSet read_point_set(const std::filesystem::path & path)
{
  return deserialize_point_set(io::read_file(path));
}

}  // namespace fvdet::frustum
