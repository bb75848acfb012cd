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


#include "fvdet/nnet/train.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace fvdet::nnet
{

std::vector<std::size_t> batch_indices(std::size_t dataset_size, int batch_size, int step,
                                       std::uint64_t seed)
{
  std::vector<std::size_t> out;
  out.reserve(static_cast<std::size_t>(batch_size));
  const std::size_t begin = static_cast<std::size_t>(step) * static_cast<std::size_t>(batch_size);
  std::size_t cached_epoch = static_cast<std::size_t>(-1);
  std::vector<std::size_t> order;
  for (std::size_t pos = begin; pos < begin + static_cast<std::size_t>(batch_size); ++pos) {
    const std::size_t epoch = pos / dataset_size;
    if (epoch != cached_epoch) {
      order.resize(dataset_size);
      std::iota(order.begin(), order.end(), std::size_t{0});
      Rng rng(Rng::derive(seed, 0x5eed, epoch));
      // Fisher-Yates with the project generator keeps the order toolchain-independent.
      for (std::size_t i = dataset_size; i > 1; --i) {
        std::swap(order[i - 1], order[rng.index(i)]);
      }
      cached_epoch = epoch;
    }
    out.push_back(order[pos % dataset_size]);
  }
  return out;
}

std::string LossTrace::to_csv() const
{
  std::ostringstream s;
  s << "step,total";
  for (const auto & n : component_names) s << ',' << n;
  s << '\n' << std::setprecision(17);
  for (std::size_t i = 0; i < total.size(); ++i) {
    s << i << ',' << total[i];
    for (double c : components[i]) s << ',' << c;
    s << '\n';
  }
  return s.str();
}

void LossTrace::write_csv(const std::filesystem::path & path) const
{
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error(path.string() + ": cannot open for writing");
  }
  out << to_csv();
}

namespace detail
{

void flatten_grads(const std::vector<Param *> & params, std::vector<double> & out)
{
  out.clear();
  for (const Param * p : params) {
    out.insert(out.end(), p->grad.values().begin(), p->grad.values().end());
  }
}

void copy_values(const std::vector<Param *> & from, const std::vector<Param *> & to)
{
  for (std::size_t i = 0; i < from.size(); ++i) {
    if (from[i] != to[i]) to[i]->value.storage() = from[i]->value.storage();
  }
}

void set_grads(const std::vector<Param *> & params, const std::vector<double> & flat)
{
  std::size_t k = 0;
  for (Param * p : params) {
    for (double & g : p->grad.values()) g = flat[k++];
  }
}

void report_divergence(int step, std::size_t sample, double loss)
{
  std::ostringstream s;
  s << "training diverged at step " << step << ", sample " << sample << ": loss = " << loss
    << "; lower the learning rate or enable gradient clipping";
  throw std::runtime_error(s.str());
}

}  // namespace detail

}  // namespace fvdet::nnet
