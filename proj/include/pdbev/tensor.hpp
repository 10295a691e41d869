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

#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace pdbev {

using Dims = std::vector<std::size_t>;

/// Dense row-major float grid (last index fastest).
///
/// Every grid the library moves around is a Tensor: image feature maps
/// (H x W x C), depth parameter maps (H x W x 2), voxel volumes
/// (X' x Y' x Z' [x C]) and BEV maps (X x Y [x C]).
class Tensor {
 public:
  Tensor() = default;

  /// Zero-filled tensor. Throws DomainError on an empty or zero extent.
  explicit Tensor(Dims dims);
  Tensor(std::initializer_list<std::size_t> dims) : Tensor(Dims(dims)) {}

  /// Takes ownership of `data`; its length must equal the product of `dims`.
  Tensor(Dims dims, std::vector<float> data);

  const Dims& dims() const noexcept { return dims_; }
  std::size_t rank() const noexcept { return dims_.size(); }
  std::size_t dim(std::size_t axis) const { return dims_.at(axis); }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  std::span<float> values() noexcept { return data_; }
  std::span<const float> values() const noexcept { return data_; }
  float* data() noexcept { return data_.data(); }
  const float* data() const noexcept { return data_.data(); }

  float& operator[](std::size_t flat) noexcept { return data_[flat]; }
  float operator[](std::size_t flat) const noexcept { return data_[flat]; }

  /// Bounds-checked multi-index access; throws std::out_of_range.
  float& at(std::initializer_list<std::size_t> idx);
  float at(std::initializer_list<std::size_t> idx) const;

  /// Flat offset of a full multi-index (bounds-checked).
  std::size_t offset(std::initializer_list<std::size_t> idx) const;

  /// Number of elements per index of the leading `axes` axes, i.e. the
  /// product of the remaining trailing extents.
  std::size_t stride_after(std::size_t axes) const;

  bool all_finite() const noexcept;

  friend bool operator==(const Tensor&, const Tensor&) = default;

 private:
  Dims dims_;
  std::vector<float> data_;
};

/// Product of extents; throws DomainError on overflow.
std::size_t element_count(const Dims& dims);

std::string dims_to_string(const Dims& dims);

/// Throws DomainError naming `what` when `t` does not have exactly `expected` dims.
void require_dims(const Tensor& t, const Dims& expected, const std::string& what);

/// Throws DomainError naming `what` when `t` does not have rank `rank`.
void require_rank(const Tensor& t, std::size_t rank, const std::string& what);

}  // namespace pdbev
