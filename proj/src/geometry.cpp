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

#include "pdbev/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "pdbev/errors.hpp"

namespace pdbev {

CameraModel::CameraModel(const CameraSpec& spec, ImageSize size)
    : name_(spec.name), K_(spec.K), R_(spec.R), T_(spec.T), size_(size) {
  if (size.height == 0 || size.width == 0) throw ConfigError("image_size: extents must be positive");
}

bool CameraModel::in_image(const Eigen::Vector2d& p) const noexcept {
  return p.x() >= 0.0 && p.y() >= 0.0 && p.x() <= static_cast<double>(size_.width - 1) &&
         p.y() <= static_cast<double>(size_.height - 1);
}

std::optional<Projection> project_point(const CameraModel& cam, const Eigen::Vector3d& point) {
  const Eigen::Vector3d in_cam = cam.R() * point + cam.T();
  const double depth = in_cam.z();
  if (!(depth > kDepthEpsilon)) return std::nullopt;
  const Eigen::Vector3d h = cam.K() * in_cam;
  return Projection{{h.x() / h.z(), h.y() / h.z()}, depth};
}

VoxelGrid::VoxelGrid(GridConfig config) : config_(std::move(config)) { validate(config_); }

Eigen::Vector3d VoxelGrid::voxel_center(const VoxelIndex& idx) const {
  for (int a = 0; a < 3; ++a) {
    if (idx[a] >= config_.counts[a]) {
      throw std::out_of_range("voxel index " + std::to_string(idx[a]) + " out of range on axis " +
                              std::to_string(a) + " (count " + std::to_string(config_.counts[a]) + ")");
    }
  }
  return center_unchecked(idx[0], idx[1], idx[2]);
}

bool bilinear_sample_into(const Tensor& map, const Eigen::Vector2d& p, std::span<float> out) {
  if (map.rank() != 2 && map.rank() != 3) throw DomainError("bilinear_sample: map must be H x W [x C]");
  const std::size_t h = map.dim(0);
  const std::size_t w = map.dim(1);
  const std::size_t c = map.rank() == 3 ? map.dim(2) : 1;
  if (out.size() != c) throw DomainError("bilinear_sample: output has wrong channel count");
  const double u = p.x();
  const double v = p.y();
  if (!(u >= 0.0 && v >= 0.0 && u <= static_cast<double>(w - 1) && v <= static_cast<double>(h - 1))) {
    return false;
  }
  const std::size_t u0 = std::min(static_cast<std::size_t>(u), w - 1);
  const std::size_t v0 = std::min(static_cast<std::size_t>(v), h - 1);
  const std::size_t u1 = std::min(u0 + 1, w - 1);
  const std::size_t v1 = std::min(v0 + 1, h - 1);
  const double fu = u - static_cast<double>(u0);
  const double fv = v - static_cast<double>(v0);
  const double w00 = (1.0 - fu) * (1.0 - fv);
  const double w01 = fu * (1.0 - fv);
  const double w10 = (1.0 - fu) * fv;
  const double w11 = fu * fv;
  const float* base = map.data();
  const float* a = base + (v0 * w + u0) * c;
  const float* b = base + (v0 * w + u1) * c;
  const float* d = base + (v1 * w + u0) * c;
  const float* e = base + (v1 * w + u1) * c;
  for (std::size_t ch = 0; ch < c; ++ch) {
    out[ch] = static_cast<float>(w00 * a[ch] + w01 * b[ch] + w10 * d[ch] + w11 * e[ch]);
  }
  return true;
}

std::optional<std::vector<float>> bilinear_sample(const Tensor& map, const Eigen::Vector2d& p) {
  std::vector<float> out(map.rank() == 3 ? map.dim(2) : 1);
  if (!bilinear_sample_into(map, p, out)) return std::nullopt;
  return out;
}

}  // namespace pdbev
