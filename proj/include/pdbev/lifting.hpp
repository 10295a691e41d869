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

#include <span>

#include "pdbev/depth_model.hpp"
#include "pdbev/geometry.hpp"
#include "pdbev/tensor.hpp"

namespace pdbev {

/// Smallest per-view lifting weight for a voxel that projects into the
/// image. Keeps the likelihood volume strictly positive wherever some view
/// observes the voxel, even when the pdf underflows.
inline constexpr float kMinLikelihood = 1.17549435e-38f;  // FLT_MIN

/// One camera's inputs to the lift: an H x W x CH feature map, its H x W x 2
/// Laplace parameters and the camera itself. All three share (H, W).
class ViewInput {
 public:
  ViewInput(Tensor feature, DepthParamMap depth, CameraModel camera);

  const Tensor& feature() const noexcept { return feature_; }
  const DepthParamMap& depth() const noexcept { return depth_; }
  const CameraModel& camera() const noexcept { return camera_; }
  std::size_t channels() const noexcept { return feature_.dim(2); }

 private:
  Tensor feature_;
  DepthParamMap depth_;
  CameraModel camera_;
};

struct LiftResult {
  Tensor features;    // X' x Y' x Z' x CH
  Tensor likelihood;  // X' x Y' x Z'
};

/// Geometry-aware lift. For every voxel and view whose projection lands in
/// the image, alpha = laplace_pdf(d, (mu, b) sampled bilinearly at p); the
/// voxel accumulates alpha * feature(p) and alpha, summed over views.
/// Throws DomainError for an empty view list or mismatched channel counts.
LiftResult lift(std::span<const ViewInput> views, const VoxelGrid& grid, unsigned threads = 1);

/// Uniform-depth baseline: same as lift with alpha fixed to 1.
Tensor lift_uniform(std::span<const ViewInput> views, const VoxelGrid& grid, unsigned threads = 1);

}  // namespace pdbev
