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

#include "pdbev/lifting.hpp"

#include <algorithm>
#include <vector>

#include "pdbev/errors.hpp"
#include "pdbev/parallel.hpp"
#include "pdbev/simd/kernels.hpp"

namespace pdbev {

ViewInput::ViewInput(Tensor feature, DepthParamMap depth, CameraModel camera)
    : feature_(std::move(feature)), depth_(std::move(depth)), camera_(std::move(camera)) {
  require_rank(feature_, 3, "feature map of view '" + camera_.name() + "'");
  const ImageSize size = camera_.image_size();
  if (feature_.dim(0) != size.height || feature_.dim(1) != size.width) {
    throw DomainError("view '" + camera_.name() + "': feature map " + dims_to_string(feature_.dims()) +
                      " does not match image size " + std::to_string(size.height) + "x" + std::to_string(size.width));
  }
  if (depth_.height() != size.height || depth_.width() != size.width) {
    throw DomainError("view '" + camera_.name() + "': depth map " + dims_to_string(depth_.tensor().dims()) +
                      " does not match image size");
  }
}

namespace {

std::size_t check_views(std::span<const ViewInput> views) {
  if (views.empty()) throw DomainError("lift: no views");
  const std::size_t ch = views.front().channels();
  for (const auto& v : views) {
    if (v.channels() != ch) {
      throw DomainError("lift: channel mismatch, view '" + v.camera().name() + "' has " +
                        std::to_string(v.channels()) + " channels, expected " + std::to_string(ch));
    }
  }
  return ch;
}

// Shared voxel loop; `weight` gives the lifting weight of one view's projection.
template <typename WeightFn>
void accumulate(std::span<const ViewInput> views, const VoxelGrid& grid, unsigned threads, std::size_t ch,
                Tensor& features, Tensor* likelihood, WeightFn weight) {
  const auto& k = simd::kernels();
  parallel_for(grid.nx(), threads, [&](std::size_t i_begin, std::size_t i_end) {
    std::vector<float> sample(ch);
    for (std::size_t i = i_begin; i < i_end; ++i) {
      for (std::size_t j = 0; j < grid.ny(); ++j) {
        for (std::size_t z = 0; z < grid.nz(); ++z) {
          const std::size_t flat = grid.flat(i, j, z);
          const Eigen::Vector3d center = grid.center_unchecked(i, j, z);
          float* out = features.data() + flat * ch;
          float mass = 0.0f;
          for (const auto& view : views) {
            const auto proj = project_point(view.camera(), center);
            if (!proj || !view.camera().in_image(proj->pixel)) continue;
            const float alpha = weight(view, *proj);
            if (!bilinear_sample_into(view.feature(), proj->pixel, sample)) continue;
            k.axpy(alpha, sample.data(), out, ch);
            mass += alpha;
          }
          if (likelihood) (*likelihood)[flat] = mass;
        }
      }
    }
  });
}

}  // namespace

LiftResult lift(std::span<const ViewInput> views, const VoxelGrid& grid, unsigned threads) {
  const std::size_t ch = check_views(views);
  LiftResult r{Tensor({grid.nx(), grid.ny(), grid.nz(), ch}), Tensor(grid.volume_dims())};
  accumulate(views, grid, threads, ch, r.features, &r.likelihood,
             [](const ViewInput& view, const Projection& proj) {
               float prm[2];
               bilinear_sample_into(view.depth().tensor(), proj.pixel, prm);
               const LaplaceParams lp{prm[0], std::max<double>(prm[1], kMinDiversity)};
               return std::max(static_cast<float>(laplace_pdf(proj.depth, lp)), kMinLikelihood);
             });
  return r;
}

Tensor lift_uniform(std::span<const ViewInput> views, const VoxelGrid& grid, unsigned threads) {
  const std::size_t ch = check_views(views);
  Tensor features({grid.nx(), grid.ny(), grid.nz(), ch});
  accumulate(views, grid, threads, ch, features, nullptr,
             [](const ViewInput&, const Projection&) { return 1.0f; });
  return features;
}

}  // namespace pdbev
