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


#ifndef FVDET__KITTIO__BENCHMARK_HPP_
#define FVDET__KITTIO__BENCHMARK_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "fvdet/kittio/config.hpp"
#include "fvdet/nnet/tensor.hpp"
#include "fvdet/proposal/anchors.hpp"

namespace fvdet::kittio
{

struct StageStats
{
  std::string name;
  double median_ms = 0.0;
  double p95_ms = 0.0;
};

struct BenchmarkReport
{
  int reps = 0;
  std::size_t points = 0;
  std::size_t proposals = 0;
  /// projection, decode, nms, extrusion, in that order.
  std::vector<StageStats> stages;
  StageStats total;

  std::string to_json() const;
  std::string to_text() const;
};

/// Median and 95th percentile (nearest rank) of the samples.
StageStats summarize(const std::string & name, std::vector<double> samples_ms);

/// A synthetic scene from cfg.synth whose ground returns are drawn until
/// the cloud holds `points` points. Deterministic per seed.
PointCloud bench_cloud(const PipelineConfig & cfg, std::size_t points, std::uint64_t seed);

/// Times the non-network path on `cloud`: projection to the upscaled map,
/// decoding of the fixed head tensors `heads`, per-class NMS, and extrusion
/// of every kept proposal. One untimed warm-up run precedes `reps` timed
/// runs, all single-threaded.
BenchmarkReport benchmark(const PointCloud & cloud, const std::vector<nnet::Tensor> & heads,
                          const std::vector<proposal::AnchorPrior> & priors,
                          const PipelineConfig & cfg, int reps);

}  // namespace fvdet::kittio

#endif  // FVDET__KITTIO__BENCHMARK_HPP_
