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


#include "fvdet/nnet/tensor.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace fvdet::nnet
{

std::size_t shape_size(const std::vector<std::size_t> & shape)
{
  std::size_t n = 1;
  for (std::size_t d : shape) {
    n *= d;
  }
  return n;
}

Tensor::Tensor(std::vector<std::size_t> shape, double fill)
: shape_(std::move(shape)), data_(shape_size(shape_), fill)
{
}

Tensor::Tensor(std::vector<std::size_t> shape, std::vector<double> data)
: shape_(std::move(shape)), data_(std::move(data))
{
  if (data_.size() != shape_size(shape_)) {
    throw std::invalid_argument("Tensor: data length does not match shape " + shape_string());
  }
}

void Tensor::fill(double v)
{
  std::fill(data_.begin(), data_.end(), v);
}

Tensor & Tensor::operator+=(const Tensor & o)
{
  if (!same_shape(o)) {
    throw std::invalid_argument("Tensor +=: shape mismatch " + shape_string() + " vs " +
                                o.shape_string());
  }
  for (std::size_t i = 0; i < data_.size(); ++i) {
    data_[i] += o.data_[i];
  }
  return *this;
}

bool Tensor::all_finite() const
{
  for (double v : data_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

std::string Tensor::shape_string() const
{
  std::ostringstream s;
  s << '(';
  for (std::size_t i = 0; i < shape_.size(); ++i) {
    s << (i ? ", " : "") << shape_[i];
  }
  s << ')';
  return s.str();
}

void check_finite(const Tensor & t, const char * where, bool force)
{
#ifdef NDEBUG
  if (!force) return;
#else
  (void)force;
#endif
  if (!t.all_finite()) {
    throw std::runtime_error(std::string("non-finite values after ") + where);
  }
}

}  // namespace fvdet::nnet
