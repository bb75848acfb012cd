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


#include <gtest/gtest.h>

#include <cmath>

#include "fvdet/eval/average_precision.hpp"
#include "fvdet/eval/iou.hpp"
#include "fvdet/eval/report.hpp"
#include "oracles.hpp"
#include "scenarios.hpp"

namespace fvdet::eval
{
namespace
{

Box3D box(double cx, double cy, double heading = 0.0, double l = 4.0, double w = 2.0)
{
  return {cx, cy, 0.0, 1.5, w, l, heading};
}

TEST(Iou, FixedCases)
{
  EXPECT_NEAR(iou_bev(box(0, 0), box(0, 0)), 1.0, 1e-12);
  EXPECT_EQ(iou_bev(box(0, 0), box(10, 0)), 0.0);
  EXPECT_NEAR(iou_bev(box(0, 0), box(2, 0)), 1.0 / 3.0, 1e-12);
  // Heading differs by pi: same footprint.
  EXPECT_NEAR(iou_bev(box(1, 2, 0.3), box(1, 2, 0.3 + kPi)), 1.0, 1e-12);
}

TEST(Iou, RotatedSquareOctagon)
{
  const Box3D a{0, 0, 0, 1, 1, 1, 0};
  const Box3D b{0, 0, 0, 1, 1, 1, kPi / 4};
  const double inter = 2.0 * (std::sqrt(2.0) - 1.0);
  EXPECT_NEAR(bev_intersection_area(a, b), inter, 1e-12);
  EXPECT_NEAR(iou_bev(a, b), inter / (2.0 - inter), 1e-12);
  Rng rng(1);
  EXPECT_NEAR(test::monte_carlo_iou_bev(a, b, 1000000, rng), inter / (2.0 - inter), 0.01);
}

TEST(Iou, MatchesMonteCarloOnRandomPairs)
{
  Rng rng(2);
  for (int i = 0; i < 100; ++i) {
    const Box3D a{rng.uniform(-1, 1), rng.uniform(-1, 1), 0, 1.5, rng.uniform(0.5, 2), rng.uniform(1, 4),
                  rng.uniform(0, kTwoPi)};
    const Box3D b{rng.uniform(-1, 1), rng.uniform(-1, 1), 0, 1.5, rng.uniform(0.5, 2), rng.uniform(1, 4),
                  rng.uniform(0, kTwoPi)};
    EXPECT_NEAR(iou_bev(a, b), test::monte_carlo_iou_bev(a, b, 1000000, rng), 0.01) << i;
  }
}

TEST(Iou, ThreeDimensionalAlgebraicCases)
{
  const Box3D a{0, 0, 0, 2, 2, 2, 0};
  EXPECT_NEAR(iou_3d(a, a), 1.0, 1e-12);
  Box3D far = a;
  far.cz = 5;
  EXPECT_EQ(iou_3d(a, far), 0.0);
  Box3D up = a;
  up.cz = 1;
  EXPECT_NEAR(iou_3d(a, up), 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(iou_2d_map({10, 10, 4, 4}, {12, 10, 4, 4}), 1.0 / 3.0, 1e-12);
}

TEST(Iou, PolygonHelpers)
{
  EXPECT_NEAR(polygon_area({{0, 0}, {2, 0}, {2, 3}, {0, 3}}), 6.0, 1e-12);
  const auto clipped = clip_convex({{0, 0}, {2, 0}, {2, 2}, {0, 2}}, {{1, 1}, {3, 1}, {3, 3}, {1, 3}});
  EXPECT_NEAR(polygon_area(clipped), 1.0, 1e-12);
}

GroundTruth gt(double cx, int sample, ClassId cls = ClassId::kCar)
{
  GroundTruth g;
  g.box = box(cx, 0);
  g.cls = cls;
  g.sample = sample;
  g.pixel_height = 100.0;
  return g;
}

Detection det(double cx, int sample, double score, ClassId cls = ClassId::kCar)
{
  Detection d;
  d.box = box(cx, 0);
  d.cls = cls;
  d.score = score;
  d.sample = sample;
  return d;
}

EvalOptions bev_at(double thr)
{
  EvalOptions o;
  o.kind = IouKind::kBev;
  o.bucket = Bucket::kAll;
  o.iou_threshold = thr;
  return o;
}

TEST(AveragePrecision, PerfectAndZero)
{
  std::vector<GroundTruth> gts{gt(0, 0), gt(10, 0), gt(0, 1)};
  std::vector<Detection> dets{det(0, 0, 0.9), det(10, 0, 0.8), det(0, 1, 0.7)};
  EXPECT_EQ(*evaluate(dets, gts, ClassId::kCar, bev_at(0.5)).ap, 1.0);
  std::vector<Detection> wrong{det(30, 0, 0.9), det(50, 1, 0.8)};
  EXPECT_EQ(*evaluate(wrong, gts, ClassId::kCar, bev_at(0.5)).ap, 0.0);
  EXPECT_FALSE(evaluate(dets, {}, ClassId::kCar, bev_at(0.5)).ap.has_value());
}

TEST(AveragePrecision, HandEnumeratedThreeDetections)
{
  std::vector<GroundTruth> gts{gt(0, 0), gt(10, 0)};
  std::vector<Detection> dets{det(0, 0, 0.9), det(30, 0, 0.8), det(10, 0, 0.7)};
  const auto c = evaluate(dets, gts, ClassId::kCar, bev_at(0.5));
  ASSERT_EQ(c.points.size(), 3u);
  EXPECT_EQ(c.points[0].recall, 0.5);
  EXPECT_EQ(c.points[0].precision, 1.0);
  EXPECT_EQ(c.points[1].precision, 0.5);
  EXPECT_EQ(c.points[2].recall, 1.0);
  EXPECT_NEAR(c.points[2].precision, 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(*c.ap, 0.848485, 1e-6);
  EXPECT_NEAR(*c.ap, (6.0 + 5.0 * 2.0 / 3.0) / 11.0, 1e-15);
}

TEST(AveragePrecision, DontCareAbsorbsDetections)
{
  std::vector<GroundTruth> gts{gt(0, 0)};
  GroundTruth dc = gt(20, 0);
  dc.dont_care = true;
  gts.push_back(dc);
  std::vector<Detection> dets{det(0, 0, 0.5), det(20, 0, 0.9), det(20.2, 0, 0.8, ClassId::kPedestrian)};
  const auto c = evaluate(dets, gts, ClassId::kCar, bev_at(0.5));
  EXPECT_EQ(c.num_gt, 1u);
  EXPECT_EQ(c.false_positives, 0u);
  EXPECT_EQ(*c.ap, 1.0);
}

TEST(AveragePrecision, PersonCoversPedestrianAndCyclist)
{
  std::vector<GroundTruth> gts{gt(0, 0, ClassId::kPedestrian), gt(10, 0, ClassId::kCyclist)};
  std::vector<Detection> dets{det(0, 0, 0.9, ClassId::kPerson), det(10, 0, 0.8, ClassId::kCyclist)};
  EXPECT_EQ(*evaluate(dets, gts, ClassId::kPerson, bev_at(0.5)).ap, 1.0);
  EXPECT_EQ(evaluate(dets, gts, ClassId::kPedestrian, bev_at(0.5)).num_gt, 1u);
}

TEST(AveragePrecision, ElevenPointInterpolation)
{
  EXPECT_EQ(ap_11point({}), 0.0);
  EXPECT_NEAR(ap_11point({{0.2, 1.0}}), 3.0 / 11.0, 1e-15);
  EXPECT_NEAR(average_precision({{1.0, 0.5}}, ApMode::k40Point), 0.5, 1e-15);
}

TEST(AveragePrecision, MatchesReferenceOnRandomScenarios)
{
  Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const auto [dets, gts] = test::random_eval_scenario(rng);
    for (ClassId cls : {ClassId::kCar, ClassId::kPedestrian, ClassId::kPerson}) {
      for (Bucket b : {Bucket::kEasy, Bucket::kModerate, Bucket::kHard, Bucket::kAll}) {
        for (IouKind kind : {IouKind::kBev, IouKind::k3d}) {
          const double thr = cls == ClassId::kCar ? 0.7 : 0.5;
          EvalOptions o;
          o.kind = kind;
          o.bucket = b;
          o.iou_threshold = thr;
          const auto c = evaluate(dets, gts, cls, o);
          const auto ref = test::reference_evaluate(dets, gts, cls, b, kind, thr);
          ASSERT_EQ(c.num_gt, static_cast<std::size_t>(ref.num_gt));
          ASSERT_EQ(c.points.size(), ref.pr.size()) << trial;
          for (std::size_t i = 0; i < c.points.size(); ++i) {
            EXPECT_EQ(c.points[i].recall, ref.pr[i].first);
            EXPECT_EQ(c.points[i].precision, ref.pr[i].second);
          }
          if (ref.num_gt > 0) EXPECT_EQ(*c.ap, ref.ap) << trial;
        }
      }
    }
  }
}

TEST(Report, JsonRoundTripAndLookup)
{
  std::vector<GroundTruth> gts{gt(0, 0), gt(10, 0)};
  std::vector<Detection> dets{det(0, 0, 0.9), det(30, 0, 0.8), det(10, 0, 0.7)};
  ReportOptions o;
  o.buckets = {Bucket::kAll};
  o.kinds = {IouKind::kBev};
  o.iou_threshold = 0.5;
  const auto r = build_report(dets, gts, o);
  EXPECT_NEAR(*r.ap(ClassId::kCar, Bucket::kAll, IouKind::kBev), 0.848485, 1e-6);
  EXPECT_FALSE(r.ap(ClassId::kPedestrian, Bucket::kAll, IouKind::kBev).has_value());
  const auto back = parse_report_json(report_json(r));
  ASSERT_EQ(back.entries.size(), r.entries.size());
  EXPECT_EQ(*back.ap(ClassId::kCar, Bucket::kAll, IouKind::kBev), *r.ap(ClassId::kCar, Bucket::kAll, IouKind::kBev));
  EXPECT_NE(report_table(r).find("Car"), std::string::npos);
  EXPECT_THROW(parse_report_json("{not json"), std::runtime_error);
}

TEST(Buckets, NamesAndFilters)
{
  EXPECT_EQ(parse_bucket("moderate"), Bucket::kModerate);
  EXPECT_FALSE(parse_bucket("medium").has_value());
  EXPECT_EQ(parse_iou_kind("3d"), IouKind::k3d);
  GroundTruth g = gt(0, 0);
  g.pixel_height = 30;
  g.occlusion = 1;
  g.truncation = 0.2;
  EXPECT_FALSE(difficulty_spec(Bucket::kEasy).admits(g));
  EXPECT_TRUE(difficulty_spec(Bucket::kModerate).admits(g));
  EXPECT_TRUE(difficulty_spec(Bucket::kAll).admits(g));
  EXPECT_EQ(default_iou_threshold(ClassId::kCar), 0.7);
  EXPECT_EQ(default_iou_threshold(ClassId::kPedestrian), 0.5);
}

}  // namespace
}  // namespace fvdet::eval
