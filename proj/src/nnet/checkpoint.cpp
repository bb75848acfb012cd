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


#include "fvdet/nnet/checkpoint.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>
#include <stdexcept>

#include "fvdet/core/binary_io.hpp"

namespace fvdet::nnet
{

using nlohmann::json;

std::filesystem::path sidecar_path(const std::filesystem::path & path)
{
  return std::filesystem::path(path.string() + ".json");
}

void save_checkpoint(const std::vector<Param *> & params, const std::filesystem::path & path,
                     const std::string & meta_json)
{
  std::vector<char> buf;
  json layers = json::array();
  for (const Param * p : params) {
    layers.push_back({{"name", p->name}, {"shape", p->value.shape()}});
    for (double v : p->value.values()) io::put_f64(buf, v);
  }
  io::write_file(path, buf);
  json side = {{"format", "fvdet-checkpoint"},
               {"dtype", "float64-le"},
               {"params", layers},
               {"meta", json::parse(meta_json)}};
  std::ofstream out(sidecar_path(path));
  if (!out) {
    throw std::runtime_error(sidecar_path(path).string() + ": cannot open for writing");
  }
  out << side.dump(2) << '\n';
}

namespace
{

json read_sidecar(const std::filesystem::path & path)
{
  std::ifstream in(sidecar_path(path));
  if (!in) {
    throw std::runtime_error(sidecar_path(path).string() + ": missing checkpoint sidecar");
  }
  try {
    return json::parse(in);
  } catch (const json::exception & e) {
    throw std::runtime_error(sidecar_path(path).string() + ": " + e.what());
  }
}

}  // namespace

void load_checkpoint(const std::vector<Param *> & params, const std::filesystem::path & path)
{
  const json side = read_sidecar(path);
  const json & layers = side.at("params");
  if (layers.size() != params.size()) {
    throw std::runtime_error(path.string() + ": checkpoint has " + std::to_string(layers.size()) +
                             " tensors, model has " + std::to_string(params.size()));
  }
  const std::vector<char> bytes = io::read_file(path);
  std::size_t offset = 0;
  for (std::size_t i = 0; i < params.size(); ++i) {
    Param & p = *params[i];
    const auto name = layers[i].at("name").get<std::string>();
    const auto shape = layers[i].at("shape").get<std::vector<std::size_t>>();
    if (name != p.name || shape != p.value.shape()) {
      throw std::runtime_error(path.string() + ": tensor " + std::to_string(i) + " is " + name +
                               ", model expects " + p.name + " " + p.value.shape_string());
    }
    if (offset + 8 * p.value.size() > bytes.size()) {
      throw std::runtime_error(path.string() + ": truncated checkpoint");
    }
    for (double & v : p.value.values()) {
      v = io::get_f64(bytes.data() + offset);
      offset += 8;
    }
  }
  if (offset != bytes.size()) {
    throw std::runtime_error(path.string() + ": trailing bytes in checkpoint");
  }
}

std::string read_checkpoint_meta(const std::filesystem::path & path)
{
  const json side = read_sidecar(path);
  return side.contains("meta") ? side["meta"].dump() : "{}";
}

}  // namespace fvdet::nnet
