// Copyright 2026 The pdbev Authors
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

#include "pdbev/tensor.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "pdbev/errors.hpp"

namespace pdbev {

std::size_t element_count(const Dims& dims) {
  if (dims.empty()) {
    throw DomainError("tensor rank must be at least 1");
  }
  std::size_t n = 1;
  for (std::size_t d : dims) {
    if (d == 0) {
      throw DomainError("tensor extents must be positive, got " + dims_to_string(dims));
    }
    if (n > std::numeric_limits<std::size_t>::max() / d) {
      throw DomainError("tensor element count overflows: " + dims_to_string(dims));
    }
    n *= d;
  }
  return n;
}

std::string dims_to_string(const Dims& dims) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (i) os << 'x';
    os << dims[i];
  }
  os << ']';
  return os.str();
}

Tensor::Tensor(Dims dims) : dims_(std::move(dims)), data_(element_count(dims_), 0.0f) {}

Tensor::Tensor(Dims dims, std::vector<float> data) : dims_(std::move(dims)), data_(std::move(data)) {
  if (element_count(dims_) != data_.size()) {
    throw DomainError("tensor data length " + std::to_string(data_.size()) +
                      " does not match dims " + dims_to_string(dims_));
  }
}

std::size_t Tensor::offset(std::initializer_list<std::size_t> idx) const {
  if (idx.size() != dims_.size()) {
    throw std::out_of_range("index rank " + std::to_string(idx.size()) + " != tensor rank " +
                            std::to_string(dims_.size()));
  }
  std::size_t flat = 0;
  std::size_t axis = 0;
  for (std::size_t i : idx) {
    if (i >= dims_[axis]) {
      throw std::out_of_range("index " + std::to_string(i) + " out of range on axis " +
                              std::to_string(axis) + " (extent " + std::to_string(dims_[axis]) + ")");
    }
    flat = flat * dims_[axis] + i;
    ++axis;
  }
  return flat;
}

float& Tensor::at(std::initializer_list<std::size_t> idx) { return data_[offset(idx)]; }

float Tensor::at(std::initializer_list<std::size_t> idx) const { return data_[offset(idx)]; }

std::size_t Tensor::stride_after(std::size_t axes) const {
  std::size_t s = 1;
  for (std::size_t a = axes; a < dims_.size(); ++a) s *= dims_[a];
  return s;
}

bool Tensor::all_finite() const noexcept {
  for (float v : data_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

void require_dims(const Tensor& t, const Dims& expected, const std::string& what) {
  if (t.dims() != expected) {
    throw DomainError(what + ": expected dims " + dims_to_string(expected) + ", got " +
                      dims_to_string(t.dims()));
  }
}

void require_rank(const Tensor& t, std::size_t rank, const std::string& what) {
  if (t.rank() != rank) {
    throw DomainError(what + ": expected rank " + std::to_string(rank) + ", got dims " +
                      dims_to_string(t.dims()));
  }
}

}  // namespace pdbev
