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


#include "fvdet/kittio/benchmark.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <json.hpp>
#include <sstream>
#include <stdexcept>

#include "fvdet/frustum/fragment.hpp"
#include "fvdet/frustum/point_set.hpp"
#include "fvdet/kittio/dataset.hpp"
#include "fvdet/kittio/detector.hpp"

namespace fvdet::kittio
{

PointCloud bench_cloud(const PipelineConfig & cfg, std::size_t points, std::uint64_t seed)
{
  SceneSpec spec = cfg.synth;
  spec.clutter_points = 0;
  spec.seed = seed;
  Scene scene = gen_synthetic_scene(spec, cfg.projection);
  PointCloud cloud = std::move(scene.cloud);
  Rng rng(Rng::derive(seed, 0xbe4c));
  const double r0 = spec.clutter_radial_min;
  const double r1 = spec.clutter_radial_max;
  while (cloud.size() < points) {
    const double r = std::sqrt(rng.uniform(r0 * r0, r1 * r1));
    const double az = rng.uniform(-spec.clutter_azimuth, spec.clutter_azimuth);
    const Point3 p{r * std::cos(az), r * std::sin(az), spec.ground_z + rng.uniform(-0.02, 0.0),
                   rng.uniform(0.0, 0.3)};
    bool inside = false;
    for (const auto & o : scene.objects) {
      Box3D grown = o.box;
      grown.l += 0.2;
      grown.w += 0.2;
      grown.h += 0.2;
      inside = inside || point_in_box(p, grown);
    }
    if (!inside) cloud.points.push_back(p);
  }
  return cloud;
}

StageStats summarize(const std::string & name, std::vector<double> samples_ms)
{
  if (samples_ms.empty()) {
    throw std::invalid_argument("summarize: no samples");
  }
  std::sort(samples_ms.begin(), samples_ms.end());
  const std::size_t n = samples_ms.size();
  const double median = n % 2 == 1 ? samples_ms[n / 2]
                                   : 0.5 * (samples_ms[n / 2 - 1] + samples_ms[n / 2]);
  const auto rank = static_cast<std::size_t>(std::ceil(0.95 * static_cast<double>(n)));
  return {name, median, samples_ms[std::max<std::size_t>(rank, 1) - 1]};
}

BenchmarkReport benchmark(const PointCloud & cloud, const std::vector<nnet::Tensor> & heads,
                          const std::vector<proposal::AnchorPrior> & priors,
                          const PipelineConfig & cfg, int reps)
{
  if (reps < 1) {
    throw std::invalid_argument("benchmark: reps must be at least 1");
  }
  using Clock = std::chrono::steady_clock;
  auto ms = [](Clock::time_point a, Clock::time_point b) {
    return std::chrono::duration<double, std::milli>(b - a).count();
  };
  const auto grids = network_grids(cfg);
  std::vector<std::vector<double>> samples(5);
  BenchmarkReport report;
  report.reps = reps;
  report.points = cloud.size();
  for (int r = -1; r < reps; ++r) {
    const auto t0 = Clock::now();
    const auto map = network_map(cloud, cfg.projection);
    const auto t1 = Clock::now();
    const auto all = decode_heads(heads, grids, priors, cfg.projection.max_radius,
                                  cfg.pgnet.num_classes);
    const auto t2 = Clock::now();
    const auto kept = select_proposals(all, cfg.proposal, cfg.pgnet.num_classes);
    const auto t3 = Clock::now();
    const auto projected = frustum::project_cloud(cloud, cfg.projection);
    std::size_t extruded = 0;
    for (const auto & cp : kept) {
      try {
        const auto frag = frustum::fragment_from_proposal(cp.proposal, cfg.projection, cfg.margins);
        extruded += frustum::extrude_points(projected, frag, cfg.projection).points.size();
      } catch (const std::exception &) {
        // Degenerate proposals are skipped exactly as in detection.
      }
    }
    const auto t4 = Clock::now();
    if (map.occupied_count() + extruded == static_cast<std::size_t>(-1)) {
      std::puts("");  // keeps the work observable
    }
    if (r < 0) continue;
    samples[0].push_back(ms(t0, t1));
    samples[1].push_back(ms(t1, t2));
    samples[2].push_back(ms(t2, t3));
    samples[3].push_back(ms(t3, t4));
    samples[4].push_back(ms(t0, t4));
    report.proposals = kept.size();
  }
  const char * names[] = {"projection", "decode", "nms", "extrusion"};
  for (int i = 0; i < 4; ++i) report.stages.push_back(summarize(names[i], samples[static_cast<std::size_t>(i)]));
  report.total = summarize("total", samples[4]);
  return report;
}

std::string BenchmarkReport::to_json() const
{
  nlohmann::json stages_json = nlohmann::json::array();
  for (const auto & s : stages) {
    stages_json.push_back({{"stage", s.name}, {"median_ms", s.median_ms}, {"p95_ms", s.p95_ms}});
  }
  const nlohmann::json j = {{"reps", reps},
                            {"points", points},
                            {"proposals", proposals},
                            {"stages", stages_json},
                            {"total", {{"median_ms", total.median_ms}, {"p95_ms", total.p95_ms}}}};
  return j.dump(2) + "\n";
}

std::string BenchmarkReport::to_text() const
{
  std::ostringstream s;
  char buf[128];
  std::snprintf(buf, sizeof(buf), "%zu points, %zu proposals, %d reps\n", points, proposals, reps);
  s << buf;
  std::snprintf(buf, sizeof(buf), "%-12s %10s %10s\n", "stage", "median ms", "p95 ms");
  s << buf;
  for (const auto & st : stages) {
    std::snprintf(buf, sizeof(buf), "%-12s %10.3f %10.3f\n", st.name.c_str(), st.median_ms, st.p95_ms);
    s << buf;
  }
  std::snprintf(buf, sizeof(buf), "%-12s %10.3f %10.3f\n", "total", total.median_ms, total.p95_ms);
  s << buf;
  return s.str();
}

}  // namespace fvdet::kittio
