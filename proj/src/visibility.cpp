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

#include "pdbev/visibility.hpp"

#include <algorithm>
#include <string>
#include <vector>

#include "pdbev/aggregation.hpp"
#include "pdbev/errors.hpp"
#include "pdbev/parallel.hpp"
#include "pdbev/simd/kernels.hpp"

namespace pdbev {

Tensor visibility_volume(std::span<const DepthView> views, const VoxelGrid& grid, unsigned threads) {
  if (views.empty()) throw DomainError("visibility_volume: no views");
  for (const auto& v : views) {
    const ImageSize s = v.camera.image_size();
    if (v.params.height() != s.height || v.params.width() != s.width) {
      throw DomainError("visibility_volume: depth map of view '" + v.camera.name() + "' does not match image size");
    }
  }
  Tensor out(grid.volume_dims());
  parallel_for(grid.nx(), threads, [&](std::size_t i_begin, std::size_t i_end) {
    for (std::size_t i = i_begin; i < i_end; ++i) {
      for (std::size_t j = 0; j < grid.ny(); ++j) {
        for (std::size_t k = 0; k < grid.nz(); ++k) {
          const Eigen::Vector3d center = grid.center_unchecked(i, j, k);
          double best = 0.0;
          for (const auto& view : views) {
            const auto proj = project_point(view.camera, center);
            if (!proj) continue;
            float prm[2];
            if (!bilinear_sample_into(view.params.tensor(), proj->pixel, prm)) continue;
            const LaplaceParams lp{prm[0], std::max<double>(prm[1], kMinDiversity)};
            best = std::max(best, visibility_prob(proj->depth, lp));
          }
          out[grid.flat(i, j, k)] = static_cast<float>(best);
        }
      }
    }
  });
  return out;
}

Tensor visibility_bev(const Tensor& volume, const GridConfig& grid) {
  require_dims(volume, {grid.counts[0], grid.counts[1], grid.counts[2]}, "visibility_bev: volume");
  const std::size_t nz = grid.counts[2];
  Tensor column_max({grid.counts[0], grid.counts[1]});
  const auto& k = simd::kernels();
  for (std::size_t c = 0; c < column_max.size(); ++c) column_max[c] = k.max_value(volume.data() + c * nz, nz);
  return to_bev_grid(column_max, grid);
}

Tensor gt_visibility(std::span<const DenseDepthView> views, const VoxelGrid& grid, double b_gt, unsigned threads) {
  if (views.empty()) throw DomainError("gt_visibility: no views");
  std::vector<DepthView> params;
  params.reserve(views.size());
  for (const auto& v : views) {
    require_rank(v.depth, 2, "gt_visibility: dense depth of view '" + v.camera.name() + "'");
    params.push_back({DepthParamMap::from_mu(v.depth, b_gt), v.camera});
  }
  return visibility_bev(visibility_volume(params, grid, threads), grid.config());
}

}  // namespace pdbev
