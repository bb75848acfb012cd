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


#include "fvdet/eval/average_precision.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "fvdet/eval/iou.hpp"

namespace fvdet::eval
{

bool DifficultySpec::admits(const GroundTruth & gt) const
{
  return gt.pixel_height >= min_height && gt.occlusion <= max_occlusion &&
         gt.truncation <= max_truncation;
}

DifficultySpec difficulty_spec(Bucket bucket)
{
  switch (bucket) {
    case Bucket::kEasy:
      return {40.0, 0, 0.15};
    case Bucket::kModerate:
      return {25.0, 1, 0.30};
    case Bucket::kHard:
      return {25.0, 2, 0.50};
    case Bucket::kAll:
      break;
  }
  return {};
}

std::string_view bucket_name(Bucket bucket)
{
  switch (bucket) {
    case Bucket::kEasy:
      return "easy";
    case Bucket::kModerate:
      return "moderate";
    case Bucket::kHard:
      return "hard";
    case Bucket::kAll:
      return "all";
  }
  return "unknown";
}

std::optional<Bucket> parse_bucket(std::string_view name)
{
  for (Bucket b : {Bucket::kEasy, Bucket::kModerate, Bucket::kHard, Bucket::kAll}) {
    if (bucket_name(b) == name) return b;
  }
  return std::nullopt;
}

std::string_view iou_kind_name(IouKind kind)
{
  switch (kind) {
    case IouKind::kBev:
      return "bev";
    case IouKind::k3d:
      return "3d";
    case IouKind::k2dMap:
      return "2d-map";
  }
  return "unknown";
}

std::optional<IouKind> parse_iou_kind(std::string_view name)
{
  for (IouKind k : {IouKind::kBev, IouKind::k3d, IouKind::k2dMap}) {
    if (iou_kind_name(k) == name) return k;
  }
  return std::nullopt;
}

double default_iou_threshold(ClassId cls)
{
  return cls == ClassId::kCar ? 0.7 : 0.5;
}

double overlap(const Detection & d, const GroundTruth & g, IouKind kind)
{
  switch (kind) {
    case IouKind::kBev:
      return iou_bev(d.box, g.box);
    case IouKind::k3d:
      return iou_3d(d.box, g.box);
    case IouKind::k2dMap:
      return iou_2d_map(d.map_box, g.map_box);
  }
  return 0.0;
}

double average_precision(const std::vector<PRPoint> & points, ApMode mode)
{
  const int levels = mode == ApMode::k11Point ? 11 : 40;
  double sum = 0.0;
  for (int i = 0; i < levels; ++i) {
    const double r = mode == ApMode::k11Point ? i / 10.0 : (i + 1) / 40.0;
    double best = 0.0;
    for (const PRPoint & p : points) {
      // Tolerate rounding in recall values such as 3 * (1/10).
      if (p.recall >= r - 1e-12) best = std::max(best, p.precision);
    }
    sum += best;
  }
  return sum / levels;
}

double ap_11point(const std::vector<PRPoint> & points)
{
  return average_precision(points, ApMode::k11Point);
}

namespace
{

enum class Outcome { kTruePositive, kFalsePositive, kIgnored };

struct Scored
{
  double score;
  int sample;
  std::size_t index;
  Outcome outcome;
};

}  // namespace

PRCurve evaluate(const std::vector<Detection> & dets, const std::vector<GroundTruth> & gts,
                 ClassId cls, const EvalOptions & options)
{
  const DifficultySpec spec = difficulty_spec(options.bucket);
  const double thr = options.iou_threshold.value_or(default_iou_threshold(cls));

  std::map<int, std::vector<std::size_t>> det_by_sample;
  std::map<int, std::vector<std::size_t>> gt_by_sample;
  for (std::size_t i = 0; i < dets.size(); ++i) {
    if (class_matches(dets[i].cls, cls)) det_by_sample[dets[i].sample].push_back(i);
  }
  PRCurve curve;
  for (std::size_t i = 0; i < gts.size(); ++i) {
    const GroundTruth & g = gts[i];
    if (g.dont_care || class_matches(g.cls, cls)) {
      gt_by_sample[g.sample].push_back(i);
      if (!g.dont_care && spec.admits(g)) ++curve.num_gt;
    }
  }

  std::vector<Scored> scored;
  for (auto & [sample, di] : det_by_sample) {
    std::stable_sort(di.begin(), di.end(), [&](std::size_t a, std::size_t b) {
      return dets[a].score > dets[b].score;
    });
    const auto it = gt_by_sample.find(sample);
    const std::vector<std::size_t> empty;
    const auto & gi = it == gt_by_sample.end() ? empty : it->second;
    std::vector<bool> used(gi.size(), false);
    for (std::size_t d : di) {
      // Best unmatched care / out-of-bucket ground truth first.
      int best = -1;
      double best_iou = -1.0;
      for (std::size_t k = 0; k < gi.size(); ++k) {
        const GroundTruth & g = gts[gi[k]];
        if (g.dont_care || used[k]) continue;
        const double o = overlap(dets[d], g, options.kind);
        if (o >= thr && o > best_iou) {
          best_iou = o;
          best = static_cast<int>(k);
        }
      }
      Outcome outcome = Outcome::kFalsePositive;
      if (best >= 0) {
        used[static_cast<std::size_t>(best)] = true;
        outcome = spec.admits(gts[gi[static_cast<std::size_t>(best)]]) ? Outcome::kTruePositive
                                                                       : Outcome::kIgnored;
      } else {
        for (std::size_t k = 0; k < gi.size(); ++k) {
          const GroundTruth & g = gts[gi[k]];
          if (g.dont_care && overlap(dets[d], g, options.kind) >= thr) {
            outcome = Outcome::kIgnored;
            break;
          }
        }
      }
      scored.push_back({dets[d].score, sample, d, outcome});
    }
  }

  if (curve.num_gt == 0) {
    return curve;
  }
  std::stable_sort(scored.begin(), scored.end(), [](const Scored & a, const Scored & b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.sample != b.sample) return a.sample < b.sample;
    return a.index < b.index;
  });
  for (const Scored & s : scored) {
    if (s.outcome == Outcome::kIgnored) continue;
    if (s.outcome == Outcome::kTruePositive) {
      ++curve.true_positives;
    } else {
      ++curve.false_positives;
    }
    const double tp = static_cast<double>(curve.true_positives);
    curve.points.push_back(
      {tp / static_cast<double>(curve.num_gt),
       tp / static_cast<double>(curve.true_positives + curve.false_positives)});
  }
  curve.ap = average_precision(curve.points, options.mode);
  return curve;
}

}  // namespace fvdet::eval
