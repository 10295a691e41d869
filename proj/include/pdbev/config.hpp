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
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace pdbev {

struct ImageSize {
  std::size_t height = 0;
  std::size_t width = 0;
  friend bool operator==(const ImageSize&, const ImageSize&) = default;
};

/// One camera of a rig. Extrinsics map ego points into the camera frame:
/// p_cam = R * p_ego + T.
struct CameraSpec {
  std::string name;
  Eigen::Matrix3d K = Eigen::Matrix3d::Identity();
  Eigen::Matrix3d R = Eigen::Matrix3d::Identity();
  Eigen::Vector3d T = Eigen::Vector3d::Zero();
};

struct RigConfig {
  ImageSize image_size;
  std::vector<CameraSpec> cameras;
};

/// Ego-frame voxel lattice plus the BEV grid sharing its XY footprint.
/// `origin` is the min corner of the volume.
struct GridConfig {
  Eigen::Vector3d origin = Eigen::Vector3d::Zero();
  std::array<std::size_t, 3> counts{};
  Eigen::Vector3d voxel_size = Eigen::Vector3d::Ones();
  std::array<std::size_t, 2> bev_counts{};
  double bev_cell = 1.0;
};

struct Box {
  Eigen::Vector3d min = Eigen::Vector3d::Zero();
  Eigen::Vector3d max = Eigen::Vector3d::Zero();
};

/// Axis-aligned rectangle on the z = 0 plane.
struct Rect {
  Eigen::Vector2d min = Eigen::Vector2d::Zero();
  Eigen::Vector2d max = Eigen::Vector2d::Zero();
};

struct Scene {
  std::vector<Box> occluders;
  std::vector<Rect> road_rects;
  bool has_ground = true;
};

inline constexpr double kRotationTolerance = 1e-6;

// Validation throws ConfigError whose message starts with the field path.
void validate(const RigConfig& rig);
void validate(const GridConfig& grid);
void validate(const Scene& scene);
/// Road rectangles must lie inside the grid footprint.
void validate_against(const Scene& scene, const GridConfig& grid);

RigConfig parse_rig_json(std::string_view text);
GridConfig parse_grid_json(std::string_view text);
Scene parse_scene_json(std::string_view text);

RigConfig parse_rig(const std::filesystem::path& path);
GridConfig parse_grid(const std::filesystem::path& path);
Scene parse_scene(const std::filesystem::path& path);

std::string to_json(const RigConfig& rig);
std::string to_json(const GridConfig& grid);
std::string to_json(const Scene& scene);

}  // namespace pdbev
