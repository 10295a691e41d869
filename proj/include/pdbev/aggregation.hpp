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

#include "pdbev/config.hpp"
#include "pdbev/tensor.hpp"

namespace pdbev {

inline constexpr double kDefaultOccupancyBias = 1e-3;

/// Normalizes each Z column of an X' x Y' x Z' likelihood volume into an
/// occupancy distribution: (P + b_o) / sum_z (P + b_o). A column whose
/// total is zero becomes uniform 1/Z'. Throws DomainError on negative bias
/// or negative likelihoods.
Tensor occupancy(const Tensor& likelihood, double bias = kDefaultOccupancyBias);

/// Occupancy-weighted sum over Z: X' x Y' x Z' x CH features with an
/// X' x Y' x Z' occupancy give an X' x Y' x CH map.
Tensor compress(const Tensor& features, const Tensor& occupancy);

/// Block-average pooling of an X' x Y' [x C] map onto the X x Y BEV grid.
/// Throws DomainError when X'/X or Y'/Y is not an integer or the input does
/// not match the grid's volume counts.
Tensor to_bev_grid(const Tensor& map, const GridConfig& grid);

/// Pillar baseline: stacks each column's features channel-wise, giving
/// X' x Y' x (CH * Z') with channel blocks ordered z = 0 .. Z'-1.
Tensor concat_pillars(const Tensor& features);

/// Soft mask from two channels of an X x Y x C map: num / den where den > 0,
/// else 0. Reads a segmentation out of lifted indicator features without a
/// learned head. With block_width > 0 (pillar layout), numerator and
/// denominator are summed over every block: channel + m * block_width.
Tensor ratio_readout(const Tensor& bev, std::size_t numerator_channel, std::size_t denominator_channel,
                     std::size_t block_width = 0);

}  // namespace pdbev
