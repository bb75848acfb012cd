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


#ifndef FVDET__NNET__CHECKPOINT_HPP_
#define FVDET__NNET__CHECKPOINT_HPP_

#include <filesystem>
#include <string>
#include <vector>

#include "fvdet/nnet/layers.hpp"

namespace fvdet::nnet
{

/// Writes every parameter as little-endian float64, in list order, to
/// `path` and a JSON sidecar `path` + ".json" listing names and shapes plus
/// the caller's `meta` JSON text (stored under "meta").
void save_checkpoint(const std::vector<Param *> & params, const std::filesystem::path & path,
                     const std::string & meta_json = "{}");

/// Loads values saved by save_checkpoint. Throws std::runtime_error when the
/// sidecar names or shapes do not match `params`.
void load_checkpoint(const std::vector<Param *> & params, const std::filesystem::path & path);

/// The "meta" object of a checkpoint sidecar, as JSON text.
std::string read_checkpoint_meta(const std::filesystem::path & path);

std::filesystem::path sidecar_path(const std::filesystem::path & path);

}  // namespace fvdet::nnet

#endif  // FVDET__NNET__CHECKPOINT_HPP_
