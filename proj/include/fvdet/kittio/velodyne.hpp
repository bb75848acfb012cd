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


#ifndef FVDET__KITTIO__VELODYNE_HPP_
#define FVDET__KITTIO__VELODYNE_HPP_

#include <filesystem>

#include "fvdet/core/geometry.hpp"

namespace fvdet::kittio
{

/// KITTI scan: consecutive 16-byte records of little-endian float32
/// (x, y, z, intensity). Throws std::runtime_error when the file cannot be
/// read or its length is not a multiple of 16.
PointCloud read_velodyne(const std::filesystem::path & path);
void write_velodyne(const PointCloud & cloud, const std::filesystem::path & path);

}  // namespace fvdet::kittio

#endif  // FVDET__KITTIO__VELODYNE_HPP_
