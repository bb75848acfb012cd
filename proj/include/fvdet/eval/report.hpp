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


#ifndef FVDET__EVAL__REPORT_HPP_
#define FVDET__EVAL__REPORT_HPP_

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fvdet/eval/average_precision.hpp"

namespace fvdet::eval
{

struct ReportEntry
{
  ClassId cls = ClassId::kCar;
  Bucket bucket = Bucket::kModerate;
  IouKind kind = IouKind::kBev;
  double iou_threshold = 0.0;
  PRCurve curve;
};

struct Report
{
  std::vector<ReportEntry> entries;

  const ReportEntry * find(ClassId cls, Bucket bucket, IouKind kind) const;
  std::optional<double> ap(ClassId cls, Bucket bucket, IouKind kind) const;
};

struct ReportOptions
{
  std::vector<ClassId> classes{ClassId::kCar, ClassId::kPedestrian, ClassId::kCyclist};
  std::vector<Bucket> buckets{Bucket::kEasy, Bucket::kModerate, Bucket::kHard};
  std::vector<IouKind> kinds{IouKind::k2dMap, IouKind::kBev, IouKind::k3d};
  /// Replaces the per-class default overlap threshold for every entry.
  std::optional<double> iou_threshold;
  ApMode mode = ApMode::k11Point;
};

/// Evaluates every class x bucket x overlap kind combination.
Report build_report(const std::vector<Detection> & dets, const std::vector<GroundTruth> & gts,
                    const ReportOptions & options = {});

/// {"ap_mode": .., "results": [{"class", "bucket", "iou_kind", "iou_threshold",
/// "ap" (null when absent), "num_gt", "tp", "fp", "pr": [[recall, precision], ..]}]}
std::string report_json(const Report & report, ApMode mode = ApMode::k11Point);
Report parse_report_json(const std::string & text);

/// One row per overlap kind, Easy / Mod. / Hard columns per class, AP in %.
std::string report_table(const Report & report);

void write_text(const std::string & text, const std::filesystem::path & path);

}  // namespace fvdet::eval

#endif  // FVDET__EVAL__REPORT_HPP_
