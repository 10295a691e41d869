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

#include "pdbev/aggregation.hpp"

#include <cmath>
#include <string>

#include "pdbev/errors.hpp"
#include "pdbev/simd/kernels.hpp"

namespace pdbev {

Tensor occupancy(const Tensor& likelihood, double bias) {
  require_rank(likelihood, 3, "occupancy: likelihood volume");
  if (!(bias >= 0.0) || !std::isfinite(bias)) throw DomainError("occupancy: bias must be nonnegative and finite");
  for (float v : likelihood.values()) {
    if (!(v >= 0.0f) || !std::isfinite(v)) throw DomainError("occupancy: likelihood must be nonnegative and finite");
  }
  const std::size_t nz = likelihood.dim(2);
  const std::size_t columns = likelihood.size() / nz;
  Tensor out(likelihood.dims());
  const auto& k = simd::kernels();
  const float b = static_cast<float>(bias);
  for (std::size_t c = 0; c < columns; ++c) {
    k.column_normalize(likelihood.data() + c * nz, b, out.data() + c * nz, nz);
  }
  return out;
}

Tensor compress(const Tensor& features, const Tensor& occ) {
  require_rank(features, 4, "compress: feature volume");
  require_dims(occ, {features.dim(0), features.dim(1), features.dim(2)}, "compress: occupancy");
  const std::size_t nz = features.dim(2);
  const std::size_t ch = features.dim(3);
  const std::size_t columns = features.dim(0) * features.dim(1);
  Tensor out({features.dim(0), features.dim(1), ch});
  const auto& k = simd::kernels();
  for (std::size_t c = 0; c < columns; ++c) {
    float* dst = out.data() + c * ch;
    const float* w = occ.data() + c * nz;
    const float* src = features.data() + c * nz * ch;
    for (std::size_t z = 0; z < nz; ++z) k.axpy(w[z], src + z * ch, dst, ch);
  }
  return out;
}

Tensor to_bev_grid(const Tensor& map, const GridConfig& grid) {
  if (map.rank() != 2 && map.rank() != 3) throw DomainError("to_bev_grid: map must be X' x Y' [x C]");
  const std::size_t nx = map.dim(0);
  const std::size_t ny = map.dim(1);
  const std::size_t ch = map.rank() == 3 ? map.dim(2) : 1;
  if (nx != grid.counts[0] || ny != grid.counts[1]) {
    throw DomainError("to_bev_grid: map " + dims_to_string(map.dims()) + " does not match grid counts " +
                      std::to_string(grid.counts[0]) + "x" + std::to_string(grid.counts[1]));
  }
  const std::size_t bx = grid.bev_counts[0];
  const std::size_t by = grid.bev_counts[1];
  if (nx % bx != 0 || ny % by != 0) {
    throw DomainError("to_bev_grid: non-integer pooling factor " + std::to_string(nx) + "/" + std::to_string(bx) +
                      ", " + std::to_string(ny) + "/" + std::to_string(by));
  }
  const std::size_t fx = nx / bx;
  const std::size_t fy = ny / by;
  Dims out_dims = map.rank() == 3 ? Dims{bx, by, ch} : Dims{bx, by};
  Tensor out(out_dims);
  const auto& k = simd::kernels();
  const float inv = 1.0f / static_cast<float>(fx * fy);
  for (std::size_t x = 0; x < bx; ++x) {
    for (std::size_t y = 0; y < by; ++y) {
      float* dst = out.data() + (x * by + y) * ch;
      for (std::size_t i = x * fx; i < (x + 1) * fx; ++i) {
        for (std::size_t j = y * fy; j < (y + 1) * fy; ++j) k.add(map.data() + (i * ny + j) * ch, dst, ch);
      }
      if (fx * fy != 1) k.scale(inv, dst, ch);
    }
  }
  return out;
}

Tensor concat_pillars(const Tensor& features) {
  require_rank(features, 4, "concat_pillars: feature volume");
  // Row-major X' x Y' x Z' x CH already stores each column as Z' blocks of CH.
  std::vector<float> data(features.values().begin(), features.values().end());
  return Tensor({features.dim(0), features.dim(1), features.dim(2) * features.dim(3)}, std::move(data));
}

Tensor ratio_readout(const Tensor& bev, std::size_t numerator_channel, std::size_t denominator_channel,
                     std::size_t block_width) {
  require_rank(bev, 3, "ratio_readout: BEV map");
  const std::size_t ch = bev.dim(2);
  const std::size_t step = block_width == 0 ? ch : block_width;
  if (numerator_channel >= step || denominator_channel >= step) {
    throw DomainError("ratio_readout: channel index out of range for blocks of " + std::to_string(step));
  }
  if (ch % step != 0) {
    throw DomainError("ratio_readout: " + std::to_string(ch) + " channels is not a multiple of block width " +
                      std::to_string(step));
  }
  Tensor out({bev.dim(0), bev.dim(1)});
  for (std::size_t c = 0; c < out.size(); ++c) {
    const float* px = bev.data() + c * ch;
    float num = 0.0f;
    float den = 0.0f;
    for (std::size_t base = 0; base < ch; base += step) {
      num += px[base + numerator_channel];
      den += px[base + denominator_channel];
    }
    out[c] = den > 0.0f ? num / den : 0.0f;
  }
  return out;
}

}  // namespace pdbev
