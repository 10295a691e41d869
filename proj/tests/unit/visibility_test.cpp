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

#include <gtest/gtest.h>

#include "pdbev/errors.hpp"
#include "pdbev/synth.hpp"
#include "pdbev/visibility.hpp"
#include "test_support.hpp"

namespace pdbev {
namespace {

// Forward camera at 1 m over a 32 x 32 m footprint, voxel centers at z = 0.25 .. 1.75.
struct WallSetup {
  GridConfig grid = test::make_grid({-16, 0, 0}, {64, 64, 4}, 0.5, {32, 32}, 1.0);
  CameraModel cam = test::make_camera("front", test::intrinsics(32, 32, 31.5, 31.5), test::forward_rotation(),
                                      {0, 0, 1}, 64, 64);
};

TEST(VisibilityVolume, NearFarAndOutside) {
  const auto cam = test::make_camera("id", test::intrinsics(10, 10, 2, 2), Eigen::Matrix3d::Identity(), {0, 0, 0}, 5, 5);
  const std::vector<DepthView> views{{DepthParamMap::from_mu(test::filled({5, 5}, 10.0f), kMinDiversity), cam}};
  const VoxelGrid ray(test::make_grid({-0.5, -0.5, -2}, {1, 1, 16}, 1.0, {1, 1}, 1.0));
  const Tensor v = visibility_volume(views, ray);
  // centers z = -1.5 (behind), 0.5 .. 13.5
  EXPECT_EQ(v[0], 0.0f);
  EXPECT_EQ(v[1], 0.0f);
  EXPECT_GT(v[2], 0.999f);   // z = 0.5
  EXPECT_GT(v[10], 0.999f);  // z = 8.5
  EXPECT_LT(v[13], 1e-6f);   // z = 11.5
  EXPECT_LT(v[15], 1e-6f);
  for (std::size_t k = 3; k < 16; ++k) EXPECT_LE(v[k], v[k - 1]);

  const VoxelGrid off(test::make_grid({50, 0, 3}, {1, 1, 1}, 1.0, {1, 1}, 1.0));
  EXPECT_EQ(visibility_volume(views, off)[0], 0.0f);
  EXPECT_THROW(visibility_volume({}, ray), DomainError);
}

TEST(VisibilityBev, Examples) {
  const GridConfig g = test::make_grid({0, 0, 0}, {4, 4, 3}, 0.5, {2, 2}, 1.0);
  Tensor single({4, 4, 3});
  single.at({1, 2, 2}) = 1.0f;
  const Tensor b = visibility_bev(single, g);
  // Column (1, 2) is 1, its 2x2 block (0, 1) averages to 0.25.
  EXPECT_EQ(b.at({0, 1}), 0.25f);
  EXPECT_EQ(b.at({0, 0}), 0.0f);
  EXPECT_EQ(visibility_bev(Tensor({4, 4, 3}), g), Tensor({2, 2}));
  const Tensor c = visibility_bev(test::filled({4, 4, 3}, 0.7f), g);
  for (float v : c.values()) EXPECT_FLOAT_EQ(v, 0.7f);
  EXPECT_THROW(visibility_bev(Tensor({4, 4, 2}), g), DomainError);
}

TEST(GtVisibility, WallAheadSplitsNearAndFar) {
  WallSetup s;
  Scene scene;
  scene.has_ground = false;
  scene.occluders.push_back({{-50, 10, -1}, {50, 12, 20}});
  const VoxelGrid grid(s.grid);
  const std::vector<DenseDepthView> views{{raycast_depth(scene, s.cam), s.cam}};
  const Tensor vis = gt_visibility(views, grid, 0.05);
  for (std::size_t x = 0; x < 32; ++x) {
    for (std::size_t y = 0; y < 32; ++y) {
      const double cx = -16 + x + 0.5;
      const double cy = y + 0.5;
      // Whole cell well inside the horizontal frustum (|x| < y).
      if (std::abs(cx) + 0.5 > 0.9 * (cy - 0.5)) continue;
      if (cy < 9.5) {
        EXPECT_GT(vis.at({x, y}), 0.99f) << x << " " << y;
      }
      if (cy > 12) {
        EXPECT_LT(vis.at({x, y}), 0.01f) << x << " " << y;
      }
    }
  }
}

TEST(GtVisibility, GroundOnlyIsVisibleInsideFrustum) {
  WallSetup s;
  Scene scene;
  const VoxelGrid grid(s.grid);
  const std::vector<DenseDepthView> views{{raycast_depth(scene, s.cam), s.cam}};
  const Tensor vis = gt_visibility(views, grid);
  for (std::size_t x = 0; x < 32; ++x) {
    for (std::size_t y = 0; y < 32; ++y) {
      const double cx = -16 + x + 0.5;
      const double cy = y + 0.5;
      if (std::abs(cx) + 0.5 > 0.9 * (cy - 0.5) || cy < 2) continue;
      EXPECT_GT(vis.at({x, y}), 0.99f) << x << " " << y;
    }
  }
  // Behind-left corner: no camera covers it.
  EXPECT_EQ(vis.at({0, 0}), 0.0f);
}

TEST(GtVisibility, RejectsNonpositiveDepth) {
  WallSetup s;
  const VoxelGrid grid(s.grid);
  Tensor depth = test::filled({64, 64}, 5.0f);
  depth[100] = 0.0f;
  const std::vector<DenseDepthView> views{{depth, s.cam}};
  EXPECT_THROW(gt_visibility(views, grid), DomainError);
  EXPECT_THROW(gt_visibility({}, grid), DomainError);
}

TEST(Visibility, PropertyRangeAndMonotoneInViews) {
  test::Rng rng(41);
  const VoxelGrid grid(test::make_grid({-4, 0, 0}, {8, 12, 4}, 1.0, {8, 12}, 1.0));
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<DepthView> views;
    Tensor prev;
    for (int v = 0; v < 3; ++v) {
      const Eigen::Matrix3d yaw =
          Eigen::AngleAxisd(test::uniform(rng, -0.5, 0.5), Eigen::Vector3d::UnitZ()).toRotationMatrix();
      const auto cam = test::make_camera("c" + std::to_string(v), test::intrinsics(6, 6, 5.5, 3.5),
                                         test::forward_rotation() * yaw.transpose(),
                                         {test::uniform(rng, -2, 2), -1.0, test::uniform(rng, 0.5, 3)}, 8, 12);
      Tensor prm({8, 12, 2});
      for (std::size_t i = 0; i < 96; ++i) {
        prm[2 * i] = static_cast<float>(test::uniform(rng, 1, 12));
        prm[2 * i + 1] = static_cast<float>(test::uniform(rng, 1e-3, 2));
      }
      views.push_back({DepthParamMap(prm), cam});
      const Tensor vol = visibility_volume(views, grid);
      for (std::size_t i = 0; i < vol.size(); ++i) {
        ASSERT_GE(vol[i], 0.0f);
        ASSERT_LE(vol[i], 1.0f);
        if (!prev.empty()) {
          ASSERT_GE(vol[i], prev[i]);
        }
      }
      prev = vol;
    }
  }
}

TEST(Visibility, PropertyNonincreasingAlongRay) {
  test::Rng rng(42);
  WallSetup s;
  Tensor prm({64, 64, 2});
  for (std::size_t i = 0; i < 64 * 64; ++i) {
    prm[2 * i] = static_cast<float>(test::uniform(rng, 1, 30));
    prm[2 * i + 1] = static_cast<float>(kMinDiversity);
  }
  const std::vector<DepthView> views{{DepthParamMap(prm), s.cam}};
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Vector2d px(test::uniform(rng, 0, 63), test::uniform(rng, 0, 63));
    double prev = 1.0;
    for (double d = 0.5; d < 40; d += 0.37) {
      const Eigen::Vector3d p = test::unproject(s.cam, px, d);
      // One-voxel grid centered on the sample point.
      const VoxelGrid g(test::make_grid(p - Eigen::Vector3d::Constant(0.5), {1, 1, 1}, 1.0, {1, 1}, 1.0));
      const double v = visibility_volume(views, g)[0];
      ASSERT_LE(v, prev);
      prev = v;
    }
  }
}

}  // namespace
}  // namespace pdbev
