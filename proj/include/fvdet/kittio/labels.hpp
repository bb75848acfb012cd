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


#ifndef FVDET__KITTIO__LABELS_HPP_
#define FVDET__KITTIO__LABELS_HPP_

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fvdet/core/geometry.hpp"
#include "fvdet/eval/average_precision.hpp"
#include "fvdet/proposal/box2d.hpp"

namespace fvdet::kittio
{

/// One line of a KITTI label or result file, camera frame, as written.
struct KittiLabelLine
{
  std::string type;
  double truncation = 0.0;
  int occlusion = 0;
  double alpha = 0.0;
  std::array<double, 4> bbox{};  // left, top, right, bottom
  double h = 0.0;
  double w = 0.0;
  double l = 0.0;
  std::array<double, 3> location{};  // bottom center, camera frame
  double rotation_y = 0.0;
  std::optional<double> score;
};

/// Parses 15 or 16 whitespace separated fields. Throws std::runtime_error
/// naming `line_number` on a malformed line.
KittiLabelLine parse_label_line(const std::string & line, int line_number = 0);
/// Fixed six-decimal formatting.
std::string format_label_line(const KittiLabelLine & label);

/// Rigid map from the sensor frame into the rectified camera frame,
/// p_cam = A p + t, where A = R0_rect * R and t = R0_rect * T for
/// Tr_velo_to_cam = [R | T].
struct Calibration
{
  std::array<std::array<double, 3>, 3> rotation{};
  std::array<double, 3> translation{};

  /// The nominal axis permutation (x_cam = -y, y_cam = -z, z_cam = x), used
  /// for synthetic data.
  static Calibration identity();

  Point3 sensor_to_camera(const Point3 & p) const;
  Point3 camera_to_sensor(const Point3 & p) const;
};

/// Reads Tr_velo_to_cam and R0_rect from a KITTI calib file; other keys are
/// ignored. Throws std::runtime_error when either is missing or malformed.
Calibration read_calibration(const std::filesystem::path & path);

/// A label converted into the sensor frame.
struct LabeledObject
{
  std::string type;
  /// Empty for DontCare and for KITTI types outside Car / Pedestrian / Cyclist.
  std::optional<ClassId> cls;
  bool dont_care = false;
  Box3D box;
  double truncation = 0.0;
  int occlusion = 0;
  proposal::MapBox map_box;
  std::optional<double> score;
};

LabeledObject label_to_object(const KittiLabelLine & label, const Calibration & calib);
KittiLabelLine object_to_label(const LabeledObject & object, const Calibration & calib);

std::vector<KittiLabelLine> read_label_file(const std::filesystem::path & path);
void write_label_file(const std::vector<KittiLabelLine> & labels, const std::filesystem::path & path);

std::vector<LabeledObject> read_labels(const std::filesystem::path & path,
                                       const Calibration & calib = Calibration::identity());
void write_objects(const std::vector<LabeledObject> & objects, const std::filesystem::path & path,
                   const Calibration & calib = Calibration::identity());

/// Detections in the KITTI result format (16 fields, score last).
void write_detections(const std::vector<eval::Detection> & dets, const std::filesystem::path & path,
                      const Calibration & calib = Calibration::identity());
std::vector<eval::Detection> read_detections(const std::filesystem::path & path, int sample,
                                             const Calibration & calib = Calibration::identity());

/// Ground truth for evaluation; objects of other KITTI types are dropped.
std::vector<eval::GroundTruth> to_ground_truth(const std::vector<LabeledObject> & objects,
                                               int sample);

}  // namespace fvdet::kittio

#endif  // FVDET__KITTIO__LABELS_HPP_
