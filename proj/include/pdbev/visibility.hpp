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

#include "pdbev/config.hpp"
#include "pdbev/depth_model.hpp"
#include "pdbev/geometry.hpp"
#include "pdbev/tensor.hpp"

namespace pdbev {

/// Default diversity (meters) used to turn dense depth into near-delta
/// Laplace parameters for ground-truth visibility.
inline constexpr double kDefaultGtDiversity = 0.05;

struct DepthView {
  DepthParamMap params;
  CameraModel camera;
};

/// Per voxel: max over views of visibility_prob(d, params sampled at the
/// projection). Voxels no view observes get 0. X' x Y' x Z' output.
Tensor visibility_volume(std::span<const DepthView> views, const VoxelGrid& grid, unsigned threads = 1);

/// Max over Z, then block-average pooled onto the X x Y BEV grid.
Tensor visibility_bev(const Tensor& volume, const GridConfig& grid);

struct DenseDepthView {
  Tensor depth;  // H x W, meters
  CameraModel camera;
};

/// Ground-truth visibility map from dense depth: mu = depth, b = b_gt, then
/// visibility_volume + visibility_bev. Throws DomainError on nonpositive depth.
Tensor gt_visibility(std::span<const DenseDepthView> views, const VoxelGrid& grid,
                     double b_gt = kDefaultGtDiversity, unsigned threads = 1);

}  // namespace pdbev
