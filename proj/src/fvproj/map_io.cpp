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

#include "fvdet/fvproj/map_io.hpp"

#include <sstream>
#include <stdexcept>

#include "fvdet/core/binary_io.hpp"

namespace fvdet::fvproj
{

void write_map_tensor(const FrontViewMap & map, const std::filesystem::path & path)
{
  std::vector<char> buf;
  const std::size_t n = static_cast<std::size_t>(map.height()) * map.width() * 3;
  buf.reserve(16 + 4 * n);
  io::put_u32(buf, kMapMagic);
  io::put_u32(buf, static_cast<std::uint32_t>(map.height()));
  io::put_u32(buf, static_cast<std::uint32_t>(map.width()));
  io::put_u32(buf, FrontViewMap::kChannels);
  for (double v : map.data()) {
    io::put_f32(buf, static_cast<float>(v));
  }
  io::write_file(path, buf);
}

FrontViewMap read_map_tensor(const std::filesystem::path & path)
{
  const std::vector<char> bytes = io::read_file(path);
  if (bytes.size() < 16) {
    throw std::runtime_error(path.string() + ": truncated map header");
  }
  if (io::get_u32(bytes.data()) != kMapMagic) {
    throw std::runtime_error(path.string() + ": not a map tensor file");
  }
  const std::uint32_t h = io::get_u32(bytes.data() + 4);
  const std::uint32_t w = io::get_u32(bytes.data() + 8);
  const std::uint32_t c = io::get_u32(bytes.data() + 12);
  if (c != FrontViewMap::kChannels) {
    throw std::runtime_error(path.string() + ": unsupported channel count");
  }
  const std::size_t expected = 16 + static_cast<std::size_t>(h) * w * c * 4;
  if (bytes.size() != expected) {
    throw std::runtime_error(path.string() + ": size does not match header");
  }
  FrontViewMap map(static_cast<int>(h), static_cast<int>(w));
  const char * p = bytes.data() + 16;
  for (int u = 0; u < static_cast<int>(h); ++u) {
    for (int v = 0; v < static_cast<int>(w); ++v) {
      const double height = io::get_f32(p);
      const double radial = io::get_f32(p + 4);
      const double intensity = io::get_f32(p + 8);
      p += 12;
      if (radial > 0.0) {
        map.set(u, v, height, radial, intensity, -1);
      }
    }
  }
  return map;
}

void write_ppm(const RgbImage & image, const std::filesystem::path & path)
{
  std::ostringstream header;
  header << "P6\n" << image.width << ' ' << image.height << "\n255\n";
  const std::string h = header.str();
  std::vector<char> buf(h.begin(), h.end());
  buf.insert(buf.end(), image.pixels.begin(), image.pixels.end());
  io::write_file(path, buf);
}

RgbImage read_ppm(const std::filesystem::path & path)
{
  const std::vector<char> bytes = io::read_file(path);
  std::string text(bytes.begin(), bytes.end());
  std::istringstream in(text);
  std::string magic;
  int maxval = 0;
  RgbImage img;
  in >> magic >> img.width >> img.height >> maxval;
  if (!in || magic != "P6" || maxval != 255 || img.width < 0 || img.height < 0) {
    throw std::runtime_error(path.string() + ": unsupported PPM header");
  }
  in.get();
  const auto start = static_cast<std::size_t>(in.tellg());
  const std::size_t n = static_cast<std::size_t>(img.width) * img.height * 3;
  if (bytes.size() != start + n) {
    throw std::runtime_error(path.string() + ": truncated PPM data");
  }
  img.pixels.assign(bytes.begin() + static_cast<std::ptrdiff_t>(start), bytes.end());
  return img;
}

}  // namespace fvdet::fvproj
