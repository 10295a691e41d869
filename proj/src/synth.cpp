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

#include "pdbev/synth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <Eigen/Dense>

#include "pdbev/errors.hpp"

namespace pdbev {
namespace {

struct Hit {
  double t = std::numeric_limits<double>::infinity();
  bool ground = false;
};

// Ray through pixel (u, v), scaled so that t is camera-frame z-depth.
Eigen::Vector3d pixel_ray(const CameraModel& cam, double u, double v) {
  Eigen::Vector3d d = cam.K().inverse() * Eigen::Vector3d(u, v, 1.0);
  d /= d.z();
  return cam.R().transpose() * d;
}

Hit first_hit(const Scene& scene, const Eigen::Vector3d& origin, const Eigen::Vector3d& dir) {
  Hit best;
  for (const auto& box : scene.occluders) {
    if (auto t = ray_box_hit(origin, dir, box); t && *t < best.t) best = {*t, false};
  }
  if (scene.has_ground && dir.z() != 0.0) {
    const double t = -origin.z() / dir.z();
    if (t > kDepthEpsilon && t < best.t) best = {t, true};
  }
  return best;
}

bool on_road(const Scene& scene, double x, double y) {
  return std::any_of(scene.road_rects.begin(), scene.road_rects.end(), [&](const Rect& r) {
    return x >= r.min.x() && x <= r.max.x() && y >= r.min.y() && y <= r.max.y();
  });
}

}  // namespace

std::optional<double> ray_box_hit(const Eigen::Vector3d& origin, const Eigen::Vector3d& dir, const Box& box,
                                  double eps) {
  double t_near = -std::numeric_limits<double>::infinity();
  double t_far = std::numeric_limits<double>::infinity();
  for (int a = 0; a < 3; ++a) {
    if (dir(a) == 0.0) {
      if (origin(a) < box.min(a) || origin(a) > box.max(a)) return std::nullopt;
      continue;
    }
    double t0 = (box.min(a) - origin(a)) / dir(a);
    double t1 = (box.max(a) - origin(a)) / dir(a);
    if (t0 > t1) std::swap(t0, t1);
    t_near = std::max(t_near, t0);
    t_far = std::min(t_far, t1);
  }
  if (t_near > t_far) return std::nullopt;
  if (t_near > eps) return t_near;
  // Origin inside the box: the visible surface is where the ray leaves it.
  if (t_far > eps) return t_far;
  return std::nullopt;
}

Tensor raycast_depth(const Scene& scene, const CameraModel& cam, double far_depth) {
  const ImageSize size = cam.image_size();
  Tensor depth({size.height, size.width});
  const Eigen::Vector3d origin = cam.center();
  for (std::size_t v = 0; v < size.height; ++v) {
    for (std::size_t u = 0; u < size.width; ++u) {
      const Hit hit = first_hit(scene, origin, pixel_ray(cam, static_cast<double>(u), static_cast<double>(v)));
      depth[v * size.width + u] = static_cast<float>(std::min(hit.t, far_depth));
    }
  }
  return depth;
}

DepthParamMap delta_params(const Tensor& depth, double b_small) { return DepthParamMap::from_mu(depth, b_small); }

Tensor render_gt_bev(const Scene& scene, const GridConfig& grid) {
  Tensor mask({grid.bev_counts[0], grid.bev_counts[1]});
  for (std::size_t x = 0; x < grid.bev_counts[0]; ++x) {
    const double cx = grid.origin.x() + (static_cast<double>(x) + 0.5) * grid.bev_cell;
    for (std::size_t y = 0; y < grid.bev_counts[1]; ++y) {
      const double cy = grid.origin.y() + (static_cast<double>(y) + 0.5) * grid.bev_cell;
      mask[x * grid.bev_counts[1] + y] = on_road(scene, cx, cy) ? 1.0f : 0.0f;
    }
  }
  return mask;
}

RigConfig make_rig(std::size_t n, double fov_deg, std::size_t height_px, std::size_t width_px, double height_m) {
  if (n == 0) throw DomainError("make_rig: need at least one camera");
  if (!(fov_deg > 0.0 && fov_deg < 180.0)) throw DomainError("make_rig: field of view must be in (0, 180) degrees");
  if (height_px == 0 || width_px == 0) throw DomainError("make_rig: image size must be positive");

  RigConfig rig;
  rig.image_size = {height_px, width_px};
  const double f = 0.5 * static_cast<double>(width_px) / std::tan(0.5 * fov_deg * std::numbers::pi / 180.0);
  Eigen::Matrix3d K;
  K << f, 0.0, 0.5 * static_cast<double>(width_px - 1), 0.0, f, 0.5 * static_cast<double>(height_px - 1), 0.0, 0.0,
      1.0;
  // Ego -> camera for a camera looking along +Y: x_cam = X, y_cam = -Z, z_cam = Y.
  Eigen::Matrix3d forward;
  forward << 1.0, 0.0, 0.0, 0.0, 0.0, -1.0, 0.0, 1.0, 0.0;
  const Eigen::Vector3d center(0.0, 0.0, height_m);
  for (std::size_t i = 0; i < n; ++i) {
    const double yaw = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
    const Eigen::Matrix3d rz = Eigen::AngleAxisd(yaw, Eigen::Vector3d::UnitZ()).toRotationMatrix();
    CameraSpec c;
    c.name = "cam" + std::to_string(i);
    c.K = K;
    c.R = forward * rz.transpose();
    c.T = -c.R * center;
    rig.cameras.push_back(std::move(c));
  }
  validate(rig);
  return rig;
}

Tensor synth_features(const Scene& scene, const CameraModel& cam) {
  const ImageSize size = cam.image_size();
  Tensor feat({size.height, size.width, kFeatureChannels});
  const Eigen::Vector3d origin = cam.center();
  for (std::size_t v = 0; v < size.height; ++v) {
    for (std::size_t u = 0; u < size.width; ++u) {
      const Eigen::Vector3d dir = pixel_ray(cam, static_cast<double>(u), static_cast<double>(v));
      const Hit hit = first_hit(scene, origin, dir);
      bool road = false;
      if (hit.ground) {
        const Eigen::Vector3d p = origin + hit.t * dir;
        road = on_road(scene, p.x(), p.y());
      }
      float* px = feat.data() + (v * size.width + u) * kFeatureChannels;
      px[0] = static_cast<float>(u);
      px[1] = static_cast<float>(v);
      px[kRoadChannel] = road ? 1.0f : 0.0f;
      px[kMassChannel] = 1.0f;
    }
  }
  return feat;
}

std::vector<DepthSample> sparse_depth(const Tensor& depth, std::size_t stride) {
  require_rank(depth, 2, "sparse_depth: depth map");
  if (stride == 0) throw DomainError("sparse_depth: stride must be positive");
  std::vector<DepthSample> out;
  for (std::size_t r = 0; r < depth.dim(0); r += stride) {
    for (std::size_t c = 0; c < depth.dim(1); c += stride) {
      out.push_back({r, c, depth[r * depth.dim(1) + c]});
    }
  }
  return out;
}

}  // namespace pdbev
