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

#include <algorithm>
#include <cmath>
#include <map>

#include "fvdet/core/binary_io.hpp"
#include "fvdet/core/geometry.hpp"
#include "fvdet/core/rng.hpp"

namespace fvdet
{
namespace
{

TEST(RotateAboutZ, IdentityAndQuarterTurn)
{
  const Point3 p = rotate_about_z({1.0, 0.0, 0.0, 0.0}, 0.0);
  EXPECT_EQ(p.x, 1.0);
  EXPECT_EQ(p.y, 0.0);
  const Point3 q = rotate_about_z({1.0, 0.0, 0.0, 0.0}, kPi / 2);
  EXPECT_NEAR(q.x, 0.0, 1e-15);
  EXPECT_NEAR(q.y, 1.0, 1e-15);
  EXPECT_EQ(q.z, 0.0);
}

TEST(RotateAboutZ, MatchesMatrixProduct)
{
  const Point3 p{0.3, -1.2, 2.0, 0.25};
  const double a = 0.7;
  const double m[2][2] = {{std::cos(a), -std::sin(a)}, {std::sin(a), std::cos(a)}};
  const Point3 r = rotate_about_z(p, a);
  EXPECT_NEAR(r.x, m[0][0] * p.x + m[0][1] * p.y, 1e-15);
  EXPECT_NEAR(r.y, m[1][0] * p.x + m[1][1] * p.y, 1e-15);
  EXPECT_EQ(r.z, 2.0);
  EXPECT_EQ(r.intensity, 0.25);
}

TEST(RotateAboutZ, PreservesLengthAndComposes)
{
  Rng rng(3);
  for (int i = 0; i < 1000; ++i) {
    const Point3 p{rng.uniform(-50, 50), rng.uniform(-50, 50), rng.uniform(-5, 5), 0.0};
    const double a = rng.uniform(-7, 7);
    const double b = rng.uniform(-7, 7);
    const Point3 r = rotate_about_z(p, a);
    EXPECT_NEAR(std::hypot(r.x, r.y), std::hypot(p.x, p.y), 1e-12);
    const Point3 ab = rotate_about_z(rotate_about_z(p, b), a);
    const Point3 sum = rotate_about_z(p, a + b);
    EXPECT_NEAR(ab.x, sum.x, 1e-12);
    EXPECT_NEAR(ab.y, sum.y, 1e-12);
  }
}

TEST(BoxCorners, UnitCubeAxisAligned)
{
  const auto c = box_corners({0, 0, 0, 1, 1, 1, 0});
  for (const auto & p : c) {
    EXPECT_DOUBLE_EQ(std::abs(p.x), 0.5);
    EXPECT_DOUBLE_EQ(std::abs(p.y), 0.5);
    EXPECT_DOUBLE_EQ(std::abs(p.z), 0.5);
  }
  // Bottom face first, counter-clockwise seen from +Z.
  for (int i = 0; i < 4; ++i) EXPECT_LT(c[static_cast<std::size_t>(i)].z, 0.0);
  double area2 = 0.0;
  for (int i = 0; i < 4; ++i) {
    const auto & a = c[static_cast<std::size_t>(i)];
    const auto & b = c[static_cast<std::size_t>((i + 1) % 4)];
    area2 += a.x * b.y - b.x * a.y;
  }
  EXPECT_GT(area2, 0.0);
}

TEST(BoxCorners, QuarterTurnGivesSameSetForCube)
{
  const auto a = box_corners({0, 0, 0, 1, 1, 1, 0});
  const auto b = box_corners({0, 0, 0, 1, 1, 1, kPi / 2});
  for (const auto & p : b) {
    bool found = false;
    for (const auto & q : a) {
      found |= std::abs(p.x - q.x) < 1e-12 && std::abs(p.y - q.y) < 1e-12 && std::abs(p.z - q.z) < 1e-12;
    }
    EXPECT_TRUE(found);
  }
}

TEST(BoxCorners, MatchesLocalOffsetOracle)
{
  const Box3D box{1, 2, 3, 2, 1, 4, 0.5};
  const auto c = box_corners(box);
  // Local offsets in documented order: bottom (+l,+w) (-l,+w) (-l,-w) (+l,-w), then top.
  const double sx[4] = {1, -1, -1, 1};
  const double sy[4] = {1, 1, -1, -1};
  for (int i = 0; i < 8; ++i) {
    const double lx = sx[i % 4] * box.l / 2;
    const double ly = sy[i % 4] * box.w / 2;
    const double lz = (i < 4 ? -1 : 1) * box.h / 2;
    const double x = box.cx + std::cos(box.heading) * lx - std::sin(box.heading) * ly;
    const double y = box.cy + std::sin(box.heading) * lx + std::cos(box.heading) * ly;
    EXPECT_NEAR(c[static_cast<std::size_t>(i)].x, x, 1e-12);
    EXPECT_NEAR(c[static_cast<std::size_t>(i)].y, y, 1e-12);
    EXPECT_NEAR(c[static_cast<std::size_t>(i)].z, box.cz + lz, 1e-12);
  }
}

TEST(BoxCorners, MeanAndEdgeLengths)
{
  Rng rng(5);
  for (int t = 0; t < 100; ++t) {
    const Box3D box{rng.uniform(-9, 9), rng.uniform(-9, 9), rng.uniform(-2, 2), rng.uniform(0.5, 3),
                    rng.uniform(0.5, 3), rng.uniform(0.5, 6), rng.uniform(0, kTwoPi)};
    const auto c = box_corners(box);
    double mx = 0, my = 0, mz = 0;
    for (const auto & p : c) {
      mx += p.x / 8;
      my += p.y / 8;
      mz += p.z / 8;
    }
    EXPECT_NEAR(mx, box.cx, 1e-12);
    EXPECT_NEAR(my, box.cy, 1e-12);
    EXPECT_NEAR(mz, box.cz, 1e-12);
    // Edges join corners that differ in exactly one local sign.
    std::map<int, int> count;  // 0 h, 1 w, 2 l
    for (int i = 0; i < 8; ++i) {
      for (int j = i + 1; j < 8; ++j) {
        const auto si = corner_signs(i);
        const auto sj = corner_signs(j);
        int diff = 0;
        int axis = -1;
        for (int k = 0; k < 3; ++k) {
          if (si[static_cast<std::size_t>(k)] != sj[static_cast<std::size_t>(k)]) {
            ++diff;
            axis = k;
          }
        }
        if (diff != 1) continue;
        const auto & a = c[static_cast<std::size_t>(i)];
        const auto & b = c[static_cast<std::size_t>(j)];
        const double len = std::sqrt((a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y) + (a.z - b.z) * (a.z - b.z));
        const double expected = axis == 0 ? box.l : axis == 1 ? box.w : box.h;
        EXPECT_NEAR(len, expected, 1e-12);
        ++count[axis];
      }
    }
    EXPECT_EQ(count[0], 4);
    EXPECT_EQ(count[1], 4);
    EXPECT_EQ(count[2], 4);
  }
}

TEST(PointInBox, CenterAndHeight)
{
  const Box3D box{1, 2, 3, 2, 1, 4, 0.5};
  EXPECT_TRUE(point_in_box({1, 2, 3, 0}, box));
  EXPECT_FALSE(point_in_box({1, 2, 3 + box.h, 0}, box));
  // Boundary counts as inside.
  EXPECT_TRUE(point_in_box({0, 0, 0.5, 0}, Box3D{0, 0, 0, 1, 1, 1, 0}));
}

TEST(PointInBox, MatchesInverseRotationOracle)
{
  Rng rng(11);
  const Box3D box{2, -1, 0.5, 1.5, 1.8, 4.2, 2.3};
  int inside = 0;
  for (int i = 0; i < 1000; ++i) {
    const Point3 p{rng.uniform(-3, 7), rng.uniform(-6, 4), rng.uniform(-1, 2), 0};
    const Point3 local = rotate_about_z({p.x - box.cx, p.y - box.cy, p.z - box.cz, 0}, -box.heading);
    const bool expected = std::abs(local.x) <= box.l / 2 && std::abs(local.y) <= box.w / 2 &&
                          std::abs(local.z) <= box.h / 2;
    EXPECT_EQ(point_in_box(p, box), expected);
    inside += expected;
  }
  EXPECT_GT(inside, 20);
}

TEST(PointInBox, InvariantUnderJointRotation)
{
  Rng rng(12);
  for (int i = 0; i < 500; ++i) {
    Box3D box{rng.uniform(-5, 5), rng.uniform(-5, 5), 0, 1.5, 1.6, 3.9, rng.uniform(0, kTwoPi)};
    const Point3 p{box.cx + rng.uniform(-2, 2), box.cy + rng.uniform(-2, 2), rng.uniform(-1, 1), 0};
    const double a = rng.uniform(-3, 3);
    const Point3 c = rotate_about_z({box.cx, box.cy, 0, 0}, a);
    Box3D rb = box;
    rb.cx = c.x;
    rb.cy = c.y;
    rb.heading = normalize_angle(box.heading + a);
    const Point3 rp = rotate_about_z(p, a);
    // Skip points within rounding distance of a face.
    const Point3 local = rotate_about_z({p.x - box.cx, p.y - box.cy, 0, 0}, -box.heading);
    if (std::abs(std::abs(local.x) - box.l / 2) < 1e-9 || std::abs(std::abs(local.y) - box.w / 2) < 1e-9) continue;
    EXPECT_EQ(point_in_box(p, box), point_in_box(rp, rb));
  }
}

TEST(Angles, Normalization)
{
  EXPECT_DOUBLE_EQ(normalize_angle(-kPi / 2), 1.5 * kPi);
  EXPECT_DOUBLE_EQ(normalize_angle(0.0), 0.0);
  EXPECT_GE(normalize_angle(-1e-18), 0.0);
  EXPECT_LT(normalize_angle(-1e-18), kTwoPi);
  EXPECT_NEAR(wrap_to_pi(1.5 * kPi), -0.5 * kPi, 1e-15);
}

TEST(ClassIds, MergingAndNames)
{
  EXPECT_EQ(stage1_class(ClassId::kPedestrian), ClassId::kPerson);
  EXPECT_EQ(stage1_class(ClassId::kCyclist), ClassId::kPerson);
  EXPECT_EQ(stage1_class(ClassId::kCar), ClassId::kCar);
  EXPECT_TRUE(class_matches(ClassId::kCyclist, ClassId::kPerson));
  EXPECT_FALSE(class_matches(ClassId::kCar, ClassId::kPerson));
  EXPECT_FALSE(class_matches(ClassId::kPedestrian, ClassId::kCyclist));
  for (ClassId c : {ClassId::kCar, ClassId::kPedestrian, ClassId::kCyclist, ClassId::kPerson}) {
    EXPECT_EQ(parse_class(class_name(c)), c);
  }
  EXPECT_FALSE(parse_class("Van").has_value());
}

TEST(BoxValidity, RejectsNonPositiveSizes)
{
  EXPECT_TRUE(is_valid({0, 0, 0, 1, 1, 1, 0}));
  EXPECT_FALSE(is_valid({0, 0, 0, 0, 1, 1, 0}));
  EXPECT_FALSE(is_valid({0, 0, 0, 1, 1, 1, kTwoPi}));
}

TEST(Rng, DeterministicStreams)
{
  Rng a(42);
  Rng b(42);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next_u64(), b.next_u64());
  EXPECT_NE(Rng::derive(1, 2, 3), Rng::derive(1, 3, 2));
  Rng u(7);
  for (int i = 0; i < 1000; ++i) {
    const double x = u.uniform();
    EXPECT_GE(x, 0.0);
    EXPECT_LT(x, 1.0);
    EXPECT_LT(u.index(5), 5u);
  }
}

}  // namespace
}  // namespace fvdet
