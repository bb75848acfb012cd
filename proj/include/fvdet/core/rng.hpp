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

#ifndef FVDET__CORE__RNG_HPP_
#define FVDET__CORE__RNG_HPP_

#include <cstddef>
#include <cstdint>
#include <random>

namespace fvdet
{

/// Seeded generator with distribution code fixed here rather than in the
/// standard library, so streams are identical across toolchains.
class Rng
{
public:
  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi);
  /// Standard normal via Box-Muller.
  double normal();
  double normal(double mean, double stddev);
  /// Uniform integer in [0, n).
  std::size_t index(std::size_t n);
  bool bernoulli(double p);
  std::uint64_t next_u64() { return engine_(); }

  /// Derives an independent stream from a base seed and a tuple of ids,
  /// used to give every (step, sample) pair its own generator.
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0);

private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace fvdet

#endif  // FVDET__CORE__RNG_HPP_
