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

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>

#include <Eigen/Core>

#include "pdbev/config.hpp"
#include "pdbev/tensor.hpp"

namespace pdbev {

/// Points at or behind this camera-frame depth (meters) do not project.
inline constexpr double kDepthEpsilon = 1e-6;

struct Projection {
  Eigen::Vector2d pixel;  // (u, v): column, row
  double depth = 0.0;     // camera-frame z, meters
};

/// Pinhole camera. Ego frame: X right, Y forward, Z up. Camera frame:
/// x right, y down, z along the optical axis. p_cam = R * p_ego + T.
class CameraModel {
 public:
  CameraModel(const CameraSpec& spec, ImageSize size);

  const std::string& name() const noexcept { return name_; }
  const Eigen::Matrix3d& K() const noexcept { return K_; }
  const Eigen::Matrix3d& R() const noexcept { return R_; }
  const Eigen::Vector3d& T() const noexcept { return T_; }
  ImageSize image_size() const noexcept { return size_; }

  /// Camera center in the ego frame, -R^T T.
  Eigen::Vector3d center() const { return -R_.transpose() * T_; }

  /// Pixel (u, v) lies within [0, W-1] x [0, H-1].
  bool in_image(const Eigen::Vector2d& p) const noexcept;

 private:
  std::string name_;
  Eigen::Matrix3d K_;
  Eigen::Matrix3d R_;
  Eigen::Vector3d T_;
  ImageSize size_;
};

/// Solves d * p~ = K (R P + T). Empty when d <= kDepthEpsilon.
std::optional<Projection> project_point(const CameraModel& cam, const Eigen::Vector3d& point);

using VoxelIndex = std::array<std::size_t, 3>;

/// The ego-frame lattice; voxel (i, j, k) has center
/// origin + ((i + 0.5) sx, (j + 0.5) sy, (k + 0.5) sz).
class VoxelGrid {
 public:
  explicit VoxelGrid(GridConfig config);

  const GridConfig& config() const noexcept { return config_; }
  std::size_t nx() const noexcept { return config_.counts[0]; }
  std::size_t ny() const noexcept { return config_.counts[1]; }
  std::size_t nz() const noexcept { return config_.counts[2]; }
  std::size_t voxel_count() const noexcept { return nx() * ny() * nz(); }
  std::size_t column_count() const noexcept { return nx() * ny(); }

  /// Throws std::out_of_range for an index outside `counts`.
  Eigen::Vector3d voxel_center(const VoxelIndex& idx) const;

  /// Unchecked variant for hot loops.
  Eigen::Vector3d center_unchecked(std::size_t i, std::size_t j, std::size_t k) const noexcept {
    return {config_.origin.x() + (static_cast<double>(i) + 0.5) * config_.voxel_size.x(),
            config_.origin.y() + (static_cast<double>(j) + 0.5) * config_.voxel_size.y(),
            config_.origin.z() + (static_cast<double>(k) + 0.5) * config_.voxel_size.z()};
  }

  /// Row-major flat index into an X' x Y' x Z' volume.
  std::size_t flat(std::size_t i, std::size_t j, std::size_t k) const noexcept { return (i * ny() + j) * nz() + k; }

  Dims volume_dims() const { return {nx(), ny(), nz()}; }
  Dims bev_dims() const { return {config_.bev_counts[0], config_.bev_counts[1]}; }

 private:
  GridConfig config_;
};

/// Bilinear blend of the four grid values around p = (u, v) where u
/// addresses columns and v rows. `map` is H x W or H x W x C. Writes C
/// values to `out` and returns true; returns false (out untouched) when p
/// lies outside [0, W-1] x [0, H-1].
bool bilinear_sample_into(const Tensor& map, const Eigen::Vector2d& p, std::span<float> out);

std::optional<std::vector<float>> bilinear_sample(const Tensor& map, const Eigen::Vector2d& p);

}  // namespace pdbev
