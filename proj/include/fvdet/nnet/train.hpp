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


#ifndef FVDET__NNET__TRAIN_HPP_
#define FVDET__NNET__TRAIN_HPP_

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "fvdet/core/rng.hpp"
#include "fvdet/nnet/layers.hpp"
#include "fvdet/nnet/optimizer.hpp"

namespace fvdet::nnet
{

struct TrainConfig
{
  int steps = 100;
  int batch_size = 1;
  std::uint64_t seed = 0;
  int threads = 1;
  AdamConfig optimizer;
};

/// Loss of one sample; `components` follows the trace's column names.
struct SampleLoss
{
  double total = 0.0;
  std::vector<double> components;
};

/// Per-step batch means.
struct LossTrace
{
  std::vector<std::string> component_names;
  std::vector<double> total;
  std::vector<std::vector<double>> components;

  void write_csv(const std::filesystem::path & path) const;
  std::string to_csv() const;
};

/// Epoch-wise shuffled order of sample indices; batch `step` covers
/// positions [step * batch, (step + 1) * batch) of the concatenated epochs.
std::vector<std::size_t> batch_indices(std::size_t dataset_size, int batch_size, int step,
                                       std::uint64_t seed);

namespace detail
{
void flatten_grads(const std::vector<Param *> & params, std::vector<double> & out);
void copy_values(const std::vector<Param *> & from, const std::vector<Param *> & to);
void set_grads(const std::vector<Param *> & params, const std::vector<double> & flat);
[[noreturn]] void report_divergence(int step, std::size_t sample, double loss);
}  // namespace detail

/// Mini-batch training with Adam. `sample_fn(model, index, rng)` must run the
/// forward and backward pass for one sample, accumulating into the model's
/// gradients, and return its loss. Every sample's gradient is computed from
/// zero on a private model replica and the batch is reduced in sample order,
/// so the trace does not depend on `threads`. Throws std::runtime_error when
/// a loss is NaN or infinite.
template <class Model, class SampleFn>
LossTrace train(Model & model, std::size_t dataset_size, SampleFn sample_fn,
                const TrainConfig & cfg, std::vector<std::string> component_names = {},
                const std::function<void(int, const LossTrace &)> & on_step = {})
{
  if (dataset_size == 0) {
    throw std::invalid_argument("train: empty dataset");
  }
  if (cfg.batch_size <= 0 || cfg.steps < 0) {
    throw std::invalid_argument("train: batch size must be positive and steps non-negative");
  }
  const std::size_t workers =
    std::min<std::size_t>(static_cast<std::size_t>(std::max(cfg.threads, 1)),
                          static_cast<std::size_t>(cfg.batch_size));
  std::vector<Model> replicas(workers, model);
  const auto master = model.params();
  Adam adam(cfg.optimizer);

  LossTrace trace;
  trace.component_names = std::move(component_names);
  const std::size_t batch = static_cast<std::size_t>(cfg.batch_size);
  std::vector<std::vector<double>> sample_grads(batch);
  std::vector<SampleLoss> losses(batch);
  std::vector<double> reduced;

  for (int step = 0; step < cfg.steps; ++step) {
    const auto indices = batch_indices(dataset_size, cfg.batch_size, step, cfg.seed);
    auto run = [&](std::size_t w) {
      Model & rep = replicas[w];
      const auto ps = rep.params();
      detail::copy_values(master, ps);
      for (std::size_t j = w; j < batch; j += workers) {
        zero_grad(ps);
        Rng rng(Rng::derive(cfg.seed, static_cast<std::uint64_t>(step) + 1, j));
        losses[j] = sample_fn(rep, indices[j], rng);
        detail::flatten_grads(ps, sample_grads[j]);
      }
    };
    if (workers == 1) {
      run(0);
    } else {
      std::vector<std::thread> pool;
      for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run, w);
      for (auto & t : pool) t.join();
    }

    reduced.assign(sample_grads[0].size(), 0.0);
    double total = 0.0;
    std::vector<double> comps(losses[0].components.size(), 0.0);
    for (std::size_t j = 0; j < batch; ++j) {
      if (!std::isfinite(losses[j].total)) {
        detail::report_divergence(step, indices[j], losses[j].total);
      }
      total += losses[j].total;
      for (std::size_t c = 0; c < comps.size() && c < losses[j].components.size(); ++c) {
        comps[c] += losses[j].components[c];
      }
      const auto & g = sample_grads[j];
      for (std::size_t k = 0; k < reduced.size(); ++k) reduced[k] += g[k];
    }
    const double inv = 1.0 / static_cast<double>(batch);
    for (double & g : reduced) g *= inv;
    for (double & c : comps) c *= inv;
    trace.total.push_back(total * inv);
    trace.components.push_back(std::move(comps));

    detail::set_grads(master, reduced);
    adam.step(master);
    if (on_step) on_step(step, trace);
  }
  return trace;
}

}  // namespace fvdet::nnet

#endif  // FVDET__NNET__TRAIN_HPP_
