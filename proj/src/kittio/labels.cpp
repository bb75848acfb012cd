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


#include "fvdet/kittio/labels.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fvdet::kittio
{

namespace
{

[[noreturn]] void fail(int line_number, const std::string & what)
{
  throw std::runtime_error("label line " + std::to_string(line_number) + ": " + what);
}

double parse_double(const std::string & tok, int line_number, const char * field)
{
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(tok, &used);
  } catch (const std::exception &) {
    fail(line_number, std::string("cannot parse ") + field + " from '" + tok + "'");
  }
  if (used != tok.size() || !std::isfinite(v)) {
    fail(line_number, std::string("cannot parse ") + field + " from '" + tok + "'");
  }
  return v;
}

}  // namespace

KittiLabelLine parse_label_line(const std::string & line, int line_number)
{
  std::istringstream in(line);
  std::vector<std::string> tok;
  for (std::string t; in >> t;) tok.push_back(t);
  if (tok.size() != 15 && tok.size() != 16) {
    fail(line_number, "expected 15 or 16 fields, got " + std::to_string(tok.size()));
  }
  KittiLabelLine l;
  l.type = tok[0];
  l.truncation = parse_double(tok[1], line_number, "truncation");
  const double occ = parse_double(tok[2], line_number, "occlusion");
  if (occ != std::floor(occ)) fail(line_number, "occlusion must be an integer");
  l.occlusion = static_cast<int>(occ);
  l.alpha = parse_double(tok[3], line_number, "alpha");
  for (int i = 0; i < 4; ++i) {
    l.bbox[static_cast<std::size_t>(i)] = parse_double(tok[static_cast<std::size_t>(4 + i)],
                                                       line_number, "bbox");
  }
  l.h = parse_double(tok[8], line_number, "height");
  l.w = parse_double(tok[9], line_number, "width");
  l.l = parse_double(tok[10], line_number, "length");
  for (int i = 0; i < 3; ++i) {
    l.location[static_cast<std::size_t>(i)] =
      parse_double(tok[static_cast<std::size_t>(11 + i)], line_number, "location");
  }
  l.rotation_y = parse_double(tok[14], line_number, "rotation_y");
  if (tok.size() == 16) l.score = parse_double(tok[15], line_number, "score");
  return l;
}

std::string format_label_line(const KittiLabelLine & l)
{
  char buf[512];
  int n = std::snprintf(buf, sizeof(buf),
                        "%s %.6f %d %.6f %.6f %.6f %.6f %.6f %.6f %.6f %.6f %.6f %.6f %.6f %.6f",
                        l.type.c_str(), l.truncation, l.occlusion, l.alpha, l.bbox[0], l.bbox[1],
                        l.bbox[2], l.bbox[3], l.h, l.w, l.l, l.location[0], l.location[1],
                        l.location[2], l.rotation_y);
  std::string s(buf, static_cast<std::size_t>(n));
  if (l.score) {
    n = std::snprintf(buf, sizeof(buf), " %.6f", *l.score);
    s.append(buf, static_cast<std::size_t>(n));
  }
  return s;
}

Calibration Calibration::identity()
{
  Calibration c;
  c.rotation = {{{0.0, -1.0, 0.0}, {0.0, 0.0, -1.0}, {1.0, 0.0, 0.0}}};
  return c;
}

Point3 Calibration::sensor_to_camera(const Point3 & p) const
{
  const std::array<double, 3> v{p.x, p.y, p.z};
  std::array<double, 3> out{};
  for (std::size_t r = 0; r < 3; ++r) {
    out[r] = translation[r];
    for (std::size_t c = 0; c < 3; ++c) out[r] += rotation[r][c] * v[c];
  }
  return {out[0], out[1], out[2], p.intensity};
}

Point3 Calibration::camera_to_sensor(const Point3 & p) const
{
  Eigen::Matrix3d a;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      a(r, c) = rotation[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
    }
  }
  const Eigen::Vector3d rhs(p.x - translation[0], p.y - translation[1], p.z - translation[2]);
  const Eigen::Vector3d v = a.partialPivLu().solve(rhs);
  return {v.x(), v.y(), v.z(), p.intensity};
}

Calibration read_calibration(const std::filesystem::path & path)
{
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error(path.string() + ": cannot open calibration");
  }
  std::optional<std::vector<double>> tr;
  std::optional<std::vector<double>> r0;
  for (std::string line; std::getline(in, line);) {
    const auto colon = line.find(':');
    if (colon == std::string::npos) continue;
    const std::string key = line.substr(0, colon);
    std::istringstream vals(line.substr(colon + 1));
    std::vector<double> v;
    for (double x; vals >> x;) v.push_back(x);
    if (key == "Tr_velo_to_cam" || key == "Tr_velo_cam") {
      if (v.size() != 12) throw std::runtime_error(path.string() + ": malformed " + key);
      tr = v;
    } else if (key == "R0_rect" || key == "R_rect") {
      if (v.size() != 9) throw std::runtime_error(path.string() + ": malformed " + key);
      r0 = v;
    }
  }
  if (!tr || !r0) {
    throw std::runtime_error(path.string() + ": Tr_velo_to_cam and R0_rect are required");
  }
  Calibration c;
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < 3; ++k) s += (*r0)[i * 3 + k] * (*tr)[k * 4 + j];
      c.rotation[i][j] = s;
    }
    double t = 0.0;
    for (std::size_t k = 0; k < 3; ++k) t += (*r0)[i * 3 + k] * (*tr)[k * 4 + 3];
    c.translation[i] = t;
  }
  return c;
}

LabeledObject label_to_object(const KittiLabelLine & label, const Calibration & calib)
{
  LabeledObject o;
  o.type = label.type;
  o.dont_care = label.type == "DontCare";
  if (label.type == "Car") {
    o.cls = ClassId::kCar;
  } else if (label.type == "Pedestrian") {
    o.cls = ClassId::kPedestrian;
  } else if (label.type == "Cyclist") {
    o.cls = ClassId::kCyclist;
  }
  o.truncation = label.truncation;
  o.occlusion = label.occlusion;
  o.score = label.score;
  o.map_box = {0.5 * (label.bbox[0] + label.bbox[2]), 0.5 * (label.bbox[1] + label.bbox[3]),
               label.bbox[2] - label.bbox[0], label.bbox[3] - label.bbox[1]};
  // Camera y points down; the label location is the bottom face center.
  const Point3 center_cam{label.location[0], label.location[1] - 0.5 * label.h,
                          label.location[2], 0.0};
  const Point3 c = calib.camera_to_sensor(center_cam);
  // Heading axis in the camera frame is (cos ry, 0, -sin ry).
  const Point3 origin = calib.camera_to_sensor({0.0, 0.0, 0.0, 0.0});
  const Point3 dir = calib.camera_to_sensor(
    {std::cos(label.rotation_y), 0.0, -std::sin(label.rotation_y), 0.0});
  o.box = {c.x, c.y, c.z, label.h, label.w, label.l,
           normalize_angle(std::atan2(dir.y - origin.y, dir.x - origin.x))};
  return o;
}

KittiLabelLine object_to_label(const LabeledObject & o, const Calibration & calib)
{
  KittiLabelLine l;
  l.type = o.type;
  l.truncation = o.truncation;
  l.occlusion = o.occlusion;
  l.score = o.score;
  l.bbox = {o.map_box.left(), o.map_box.top(), o.map_box.right(), o.map_box.bottom()};
  l.h = o.box.h;
  l.w = o.box.w;
  l.l = o.box.l;
  const Point3 c = calib.sensor_to_camera({o.box.cx, o.box.cy, o.box.cz, 0.0});
  l.location = {c.x, c.y + 0.5 * o.box.h, c.z};
  const Point3 origin = calib.sensor_to_camera({0.0, 0.0, 0.0, 0.0});
  const Point3 dir =
    calib.sensor_to_camera({std::cos(o.box.heading), std::sin(o.box.heading), 0.0, 0.0});
  l.rotation_y = wrap_to_pi(std::atan2(-(dir.z - origin.z), dir.x - origin.x));
  l.alpha = wrap_to_pi(l.rotation_y - std::atan2(c.x, c.z));
  return l;
}

std::vector<KittiLabelLine> read_label_file(const std::filesystem::path & path)
{
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error(path.string() + ": cannot open label file");
  }
  std::vector<KittiLabelLine> out;
  int n = 0;
  for (std::string line; std::getline(in, line);) {
    ++n;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(parse_label_line(line, n));
    } catch (const std::runtime_error & e) {
      throw std::runtime_error(path.string() + ": " + e.what());
    }
  }
  return out;
}

void write_label_file(const std::vector<KittiLabelLine> & labels, const std::filesystem::path & path)
{
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error(path.string() + ": cannot open for writing");
  }
  for (const auto & l : labels) out << format_label_line(l) << '\n';
}

std::vector<LabeledObject> read_labels(const std::filesystem::path & path, const Calibration & calib)
{
  std::vector<LabeledObject> out;
  for (const auto & l : read_label_file(path)) out.push_back(label_to_object(l, calib));
  return out;
}

void write_objects(const std::vector<LabeledObject> & objects, const std::filesystem::path & path,
                   const Calibration & calib)
{
  std::vector<KittiLabelLine> lines;
  for (const auto & o : objects) lines.push_back(object_to_label(o, calib));
  write_label_file(lines, path);
}

void write_detections(const std::vector<eval::Detection> & dets, const std::filesystem::path & path,
                      const Calibration & calib)
{
  std::vector<KittiLabelLine> lines;
  for (const auto & d : dets) {
    LabeledObject o;
    o.type = std::string(class_name(d.cls));
    o.cls = d.cls;
    o.box = d.box;
    o.map_box = d.map_box;
    o.score = d.score;
    o.truncation = -1.0;
    o.occlusion = -1;
    lines.push_back(object_to_label(o, calib));
  }
  write_label_file(lines, path);
}

std::vector<eval::Detection> read_detections(const std::filesystem::path & path, int sample,
                                             const Calibration & calib)
{
  std::vector<eval::Detection> out;
  for (const auto & o : read_labels(path, calib)) {
    if (!o.cls) continue;
    out.push_back({o.box, *o.cls, o.score.value_or(1.0), sample, o.map_box});
  }
  return out;
}

std::vector<eval::GroundTruth> to_ground_truth(const std::vector<LabeledObject> & objects,
                                               int sample)
{
  std::vector<eval::GroundTruth> out;
  for (const auto & o : objects) {
    if (!o.cls && !o.dont_care) continue;
    eval::GroundTruth g;
    g.box = o.box;
    g.cls = o.cls.value_or(ClassId::kCar);
    g.sample = sample;
    g.truncation = o.truncation;
    g.occlusion = o.occlusion;
    g.pixel_height = o.map_box.h;
    g.dont_care = o.dont_care;
    g.map_box = o.map_box;
    out.push_back(g);
  }
  return out;
}

}  // namespace fvdet::kittio
