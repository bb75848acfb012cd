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


#ifndef FVDET__EVAL__AVERAGE_PRECISION_HPP_
#define FVDET__EVAL__AVERAGE_PRECISION_HPP_

#include <optional>
#include <string_view>
#include <vector>

#include "fvdet/core/geometry.hpp"
#include "fvdet/proposal/box2d.hpp"

namespace fvdet::eval
{

struct Detection
{
  Box3D box;
  ClassId cls = ClassId::kCar;
  double score = 0.0;
  int sample = 0;
  /// Front-view map box, needed for the 2d-map overlap kind.
  proposal::MapBox map_box;
};

struct GroundTruth
{
  Box3D box;
  ClassId cls = ClassId::kCar;
  int sample = 0;
  double truncation = 0.0;
  int occlusion = 0;
  /// Box height in pixels used by the difficulty filter (image height for
  /// camera labels, front-view map height for synthetic scenes).
  double pixel_height = 0.0;
  /// KITTI "DontCare" region: absorbs any number of detections of any class.
  bool dont_care = false;
  proposal::MapBox map_box;
};

enum class Bucket { kEasy, kModerate, kHard, kAll };

/// Ground-truth filter of a bucket. kAll admits everything.
struct DifficultySpec
{
  double min_height = 0.0;
  int max_occlusion = 1 << 30;
  double max_truncation = 1e300;

  bool admits(const GroundTruth & gt) const;
};

/// easy: >= 40 px, occlusion 0, truncation <= 0.15; moderate: >= 25 px,
/// <= 1, <= 0.30; hard: >= 25 px, <= 2, <= 0.50.
DifficultySpec difficulty_spec(Bucket bucket);
std::string_view bucket_name(Bucket bucket);
std::optional<Bucket> parse_bucket(std::string_view name);

enum class IouKind { kBev, k3d, k2dMap };
std::string_view iou_kind_name(IouKind kind);
std::optional<IouKind> parse_iou_kind(std::string_view name);

/// 0.7 for Car, 0.5 otherwise.
double default_iou_threshold(ClassId cls);

double overlap(const Detection & d, const GroundTruth & g, IouKind kind);

enum class ApMode { k11Point, k40Point };

struct PRPoint
{
  double recall = 0.0;
  double precision = 0.0;
};

struct PRCurve
{
  /// One point per counted detection in descending score order.
  std::vector<PRPoint> points;
  /// Absent when the bucket holds no ground truth.
  std::optional<double> ap;
  std::size_t num_gt = 0;
  std::size_t true_positives = 0;
  std::size_t false_positives = 0;
};

/// Interpolated AP: mean over recall levels r of max precision at recall >= r
/// (11 levels 0, 0.1, .., 1 or 40 levels 1/40, .., 1).
double average_precision(const std::vector<PRPoint> & points, ApMode mode = ApMode::k11Point);
double ap_11point(const std::vector<PRPoint> & points);

struct EvalOptions
{
  IouKind kind = IouKind::kBev;
  Bucket bucket = Bucket::kModerate;
  /// Overrides default_iou_threshold when set.
  std::optional<double> iou_threshold;
  ApMode mode = ApMode::k11Point;
};

/// Per sample, detections of `cls` are matched greedily by descending score
/// to the unmatched ground truth of highest overlap at or above the
/// threshold. Ground truths of `cls` outside the bucket are matched like the
/// others but their detections count neither as true nor false positives;
/// DontCare regions absorb any number of detections the same way.
PRCurve evaluate(const std::vector<Detection> & dets, const std::vector<GroundTruth> & gts,
                 ClassId cls, const EvalOptions & options);

}  // namespace fvdet::eval

#endif  // FVDET__EVAL__AVERAGE_PRECISION_HPP_
