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

#include "fvdet/core/geometry.hpp"

#include <cmath>

namespace fvdet
{

double normalize_angle(double angle)
{
  double a = std::fmod(angle, kTwoPi);
  if (a < 0.0) {
    a += kTwoPi;
  }
  // fmod of a tiny negative value can round up to exactly 2pi.
  if (a >= kTwoPi) {
    a = 0.0;
  }
  return a;
}

double wrap_to_pi(double angle)
{
  return normalize_angle(angle + kPi) - kPi;
}

Point3 rotate_about_z(const Point3 & p, double angle)
{
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {c * p.x - s * p.y, s * p.x + c * p.y, p.z, p.intensity};
}

std::array<double, 3> corner_signs(int i)
{
  static constexpr std::array<std::array<double, 2>, 4> kFace = {{
    {1.0, 1.0}, {-1.0, 1.0}, {-1.0, -1.0}, {1.0, -1.0}}};
  const auto & f = kFace[static_cast<std::size_t>(i % 4)];
  return {f[0], f[1], i < 4 ? -1.0 : 1.0};
}

std::array<Point3, 8> box_corners(const Box3D & box)
{
  std::array<Point3, 8> out{};
  const double c = std::cos(box.heading);
  const double s = std::sin(box.heading);
  for (int i = 0; i < 8; ++i) {
    const auto sign = corner_signs(i);
    const double lx = 0.5 * box.l * sign[0];
    const double ly = 0.5 * box.w * sign[1];
    const double lz = 0.5 * box.h * sign[2];
    out[static_cast<std::size_t>(i)] = {
      box.cx + c * lx - s * ly, box.cy + s * lx + c * ly, box.cz + lz, 0.0};
  }
  return out;
}

bool point_in_box(const Point3 & p, const Box3D & box)
{
  const double dx = p.x - box.cx;
  const double dy = p.y - box.cy;
  const double c = std::cos(box.heading);
  const double s = std::sin(box.heading);
  const double lx = c * dx + s * dy;
  const double ly = -s * dx + c * dy;
  const double lz = p.z - box.cz;
  return std::abs(lx) <= 0.5 * box.l && std::abs(ly) <= 0.5 * box.w &&
         std::abs(lz) <= 0.5 * box.h;
}

bool is_valid(const Box3D & box)
{
  const bool finite = std::isfinite(box.cx) && std::isfinite(box.cy) &&
                      std::isfinite(box.cz) && std::isfinite(box.heading);
  return finite && box.h > 0.0 && box.w > 0.0 && box.l > 0.0 && box.heading >= 0.0 &&
         box.heading < kTwoPi;
}

ClassId stage1_class(ClassId id)
{
  return id == ClassId::kCar ? ClassId::kCar : ClassId::kPerson;
}

bool class_matches(ClassId id, ClassId query)
{
  if (query == ClassId::kPerson) {
    return id != ClassId::kCar;
  }
  return id == query;
}

std::string_view class_name(ClassId id)
{
  switch (id) {
    case ClassId::kCar:
      return "Car";
    case ClassId::kPedestrian:
      return "Pedestrian";
    case ClassId::kCyclist:
      return "Cyclist";
    case ClassId::kPerson:
      return "Person";
  }
  return "Unknown";
}

std::optional<ClassId> parse_class(std::string_view name)
{
  if (name == "Car") return ClassId::kCar;
  if (name == "Pedestrian") return ClassId::kPedestrian;
  if (name == "Cyclist") return ClassId::kCyclist;
  if (name == "Person") return ClassId::kPerson;
  return std::nullopt;
}

}  // namespace fvdet
