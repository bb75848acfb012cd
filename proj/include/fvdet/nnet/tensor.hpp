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


#ifndef FVDET__NNET__TENSOR_HPP_
#define FVDET__NNET__TENSOR_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace fvdet::nnet
{

/// Dense float64 array in row-major order. Feature maps use HWC layout,
/// point sets use (n, C).
class Tensor
{
public:
  Tensor() = default;
  explicit Tensor(std::vector<std::size_t> shape, double fill = 0.0);
  Tensor(std::vector<std::size_t> shape, std::vector<double> data);

  const std::vector<std::size_t> & shape() const { return shape_; }
  std::size_t rank() const { return shape_.size(); }
  std::size_t dim(std::size_t i) const { return shape_.at(i); }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double * data() { return data_.data(); }
  const double * data() const { return data_.data(); }
  std::span<double> values() { return data_; }
  std::span<const double> values() const { return data_; }
  std::vector<double> & storage() { return data_; }
  const std::vector<double> & storage() const { return data_; }

  double & operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }

  /// HWC element access for rank-3 tensors.
  double & at(std::size_t h, std::size_t w, std::size_t c)
  {
    return data_[(h * shape_[1] + w) * shape_[2] + c];
  }
  double at(std::size_t h, std::size_t w, std::size_t c) const
  {
    return data_[(h * shape_[1] + w) * shape_[2] + c];
  }

  void fill(double v);
  Tensor & operator+=(const Tensor & o);
  bool all_finite() const;
  bool same_shape(const Tensor & o) const { return shape_ == o.shape_; }

  std::string shape_string() const;

private:
  std::vector<std::size_t> shape_;
  std::vector<double> data_;
};

std::size_t shape_size(const std::vector<std::size_t> & shape);

/// Throws std::runtime_error naming `where` if `t` holds NaN or Inf. Only
/// evaluated in debug builds unless `force` is set.
void check_finite(const Tensor & t, const char * where, bool force = false);

}  // namespace fvdet::nnet

#endif  // FVDET__NNET__TENSOR_HPP_
