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


#include "fvdet/kittio/velodyne.hpp"

#include <stdexcept>

#include "fvdet/core/binary_io.hpp"

namespace fvdet::kittio
{

PointCloud read_velodyne(const std::filesystem::path & path)
{
  const std::vector<char> bytes = io::read_file(path);
  if (bytes.size() % 16 != 0) {
    throw std::runtime_error(path.string() + ": length " + std::to_string(bytes.size()) +
                             " is not a multiple of 16 bytes");
  }
  PointCloud cloud;
  cloud.points.resize(bytes.size() / 16);
  const char * p = bytes.data();
  for (auto & pt : cloud.points) {
    pt.x = io::get_f32(p);
    pt.y = io::get_f32(p + 4);
    pt.z = io::get_f32(p + 8);
    pt.intensity = io::get_f32(p + 12);
    p += 16;
  }
  return cloud;
}

void write_velodyne(const PointCloud & cloud, const std::filesystem::path & path)
{
  std::vector<char> buf;
  buf.reserve(cloud.size() * 16);
  for (const auto & pt : cloud.points) {
    io::put_f32(buf, static_cast<float>(pt.x));
    io::put_f32(buf, static_cast<float>(pt.y));
    io::put_f32(buf, static_cast<float>(pt.z));
    io::put_f32(buf, static_cast<float>(pt.intensity));
  }
  io::write_file(path, buf);
}

}  // namespace fvdet::kittio
