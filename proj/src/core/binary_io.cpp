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


#include "fvdet/core/binary_io.hpp"

#include <bit>
#include <fstream>
#include <iterator>
#include <stdexcept>

namespace fvdet::io
{

void put_u32(std::vector<char> & buf, std::uint32_t v)
{
  for (int i = 0; i < 4; ++i) {
    buf.push_back(static_cast<char>((v >> (8 * i)) & 0xffu));
  }
}

void put_f32(std::vector<char> & buf, float v)
{
  put_u32(buf, std::bit_cast<std::uint32_t>(v));
}

std::uint32_t get_u32(const char * p)
{
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) {
    v |= static_cast<std::uint32_t>(static_cast<unsigned char>(p[i])) << (8 * i);
  }
  return v;
}

float get_f32(const char * p)
{
  return std::bit_cast<float>(get_u32(p));
}

void put_f64(std::vector<char> & buf, double v)
{
  const auto bits = std::bit_cast<std::uint64_t>(v);
  put_u32(buf, static_cast<std::uint32_t>(bits & 0xffffffffu));
  put_u32(buf, static_cast<std::uint32_t>(bits >> 32));
}

double get_f64(const char * p)
{
  const std::uint64_t lo = get_u32(p);
  const std::uint64_t hi = get_u32(p + 4);
  return std::bit_cast<double>(lo | (hi << 32));
}

std::vector<char> read_file(const std::filesystem::path & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open " + path.string());
  }
  std::vector<char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) {
    throw std::runtime_error("read error on " + path.string());
  }
  return bytes;
}

void write_file(const std::filesystem::path & path, const std::vector<char> & bytes)
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot create " + path.string());
  }
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) {
    throw std::runtime_error("write error on " + path.string());
  }
}

}  // namespace fvdet::io
