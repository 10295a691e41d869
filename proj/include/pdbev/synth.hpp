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
#include <optional>

#include <Eigen/Core>

#include "pdbev/config.hpp"
#include "pdbev/depth_model.hpp"
#include "pdbev/geometry.hpp"
#include "pdbev/tensor.hpp"

namespace pdbev {

/// Depth reported for pixels whose ray hits nothing.
inline constexpr double kFarDepth = 200.0;

/// Nearest ray parameter t > eps where origin + t * dir enters or leaves
/// the box; empty if the ray misses it.
std::optional<double> ray_box_hit(const Eigen::Vector3d& origin, const Eigen::Vector3d& dir, const Box& box,
                                  double eps = kDepthEpsilon);

/// Camera-frame z-depth of the first surface hit along each pixel ray
/// (occluder boxes, plus the z = 0 plane when the scene has ground);
/// `far_depth` where nothing is hit. H x W output.
Tensor raycast_depth(const Scene& scene, const CameraModel& cam, double far_depth = kFarDepth);

/// mu = depth, b = max(b_small, kMinDiversity) everywhere.
/// Throws DomainError on a nonpositive depth.
DepthParamMap delta_params(const Tensor& depth, double b_small);

/// X x Y mask: 1 where the BEV cell center lies inside a road rectangle.
Tensor render_gt_bev(const Scene& scene, const GridConfig& grid);

/// n cameras at `height_m` above the ego origin, yawed 360/n degrees apart
/// starting from camera 0 facing +Y. Square pixels with the given
/// horizontal field of view; principal point at the image center.
RigConfig make_rig(std::size_t n, double fov_deg, std::size_t height_px, std::size_t width_px, double height_m);

/// Synthetic image features, 4 channels per pixel:
///   0: u (column), 1: v (row), 2: road indicator of the surface the ray
///   hits, 3: constant 1 (so lifted volumes carry their own weight).
inline constexpr std::size_t kFeatureChannels = 4;
inline constexpr std::size_t kRoadChannel = 2;
inline constexpr std::size_t kMassChannel = 3;

Tensor synth_features(const Scene& scene, const CameraModel& cam);

/// Lidar-like sparse depth: every `stride`-th pixel in both directions.
/// Rays that hit nothing keep the far depth, like a max-range return.
std::vector<DepthSample> sparse_depth(const Tensor& depth, std::size_t stride);

}  // namespace pdbev
