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


#ifndef FVDET__CORE__BINARY_IO_HPP_
#define FVDET__CORE__BINARY_IO_HPP_

#include <cstdint>
#include <filesystem>
#include <vector>

namespace fvdet::io
{

void put_u32(std::vector<char> & buf, std::uint32_t v);
void put_f32(std::vector<char> & buf, float v);
void put_f64(std::vector<char> & buf, double v);
std::uint32_t get_u32(const char * p);
float get_f32(const char * p);
double get_f64(const char * p);

/// Whole-file reads and writes; both throw std::runtime_error on failure.
std::vector<char> read_file(const std::filesystem::path & path);
void write_file(const std::filesystem::path & path, const std::vector<char> & bytes);

}  // namespace fvdet::io

#endif  // FVDET__CORE__BINARY_IO_HPP_
