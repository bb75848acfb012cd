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

#ifndef FVDET__FVPROJ__MAP_IO_HPP_
#define FVDET__FVPROJ__MAP_IO_HPP_

#include <cstdint>
#include <filesystem>

#include "fvdet/fvproj/projection.hpp"

namespace fvdet::fvproj
{

/// Map tensor files: 16-byte header of four little-endian uint32 values
/// (magic, H, W, C) followed by H * W * C little-endian float32 values in
/// row-major HWC order. Occupancy is not stored; a cell counts as occupied
/// when its radial channel is positive.
inline constexpr std::uint32_t kMapMagic = 0x504d5646;  // "FVMP"

void write_map_tensor(const FrontViewMap & map, const std::filesystem::path & path);
FrontViewMap read_map_tensor(const std::filesystem::path & path);

/// Binary PPM (P6), maxval 255.
void write_ppm(const RgbImage & image, const std::filesystem::path & path);
RgbImage read_ppm(const std::filesystem::path & path);

}  // namespace fvdet::fvproj

#endif  // FVDET__FVPROJ__MAP_IO_HPP_
