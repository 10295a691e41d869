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
#include <span>
#include <vector>

#include "pdbev/tensor.hpp"

namespace pdbev {

/// Lower clamp on the Laplacian diversity b (meters).
inline constexpr double kMinDiversity = 1e-3;

/// Laplace(mu, b) over camera-frame depth. mu > 0, b >= kMinDiversity.
struct LaplaceParams {
  double mu = 1.0;
  double b = 1.0;

  /// Clamps b up to kMinDiversity. Throws DomainError unless mu > 0 and b is finite.
  static LaplaceParams clamped(double mu, double b);

  bool valid() const noexcept;
};

// Closed forms of the Laplacian depth distribution. Arguments are assumed
// valid (see LaplaceParams); no checks happen on these hot paths.

/// (1 / 2b) exp(-|d - mu| / b).
double laplace_pdf(double d, const LaplaceParams& prm) noexcept;

/// Piecewise CDF: 1/2 exp((x - mu)/b) below mu, 1 - 1/2 exp(-(x - mu)/b) from mu up.
double laplace_cdf(double x, const LaplaceParams& prm) noexcept;

/// Probability mass on [0, d]: F(d) - F(0). Exactly 0 at d = 0.
double occlusion_prob(double d, const LaplaceParams& prm) noexcept;

/// 1 - occlusion_prob(d). Exactly 1 at d = 0, nonincreasing in d.
double visibility_prob(double d, const LaplaceParams& prm) noexcept;

struct NllGrad {
  double d_mu = 0.0;
  double d_b = 0.0;
};

/// Gradient of log(2b) + |d_gt - mu| / b. The subgradient at d_gt == mu is 0.
NllGrad depth_nll_grad(const LaplaceParams& prm, double d_gt) noexcept;

/// H x W x 2 grid of per-pixel Laplace parameters (channel 0 = mu,
/// channel 1 = b). Construction validates every pixel.
class DepthParamMap {
 public:
  /// Throws DomainError on wrong shape, mu <= 0, b < kMinDiversity or non-finite values.
  explicit DepthParamMap(Tensor params);

  /// Builds a map with constant b from an H x W mu grid; b is clamped to kMinDiversity.
  static DepthParamMap from_mu(const Tensor& mu, double b);

  std::size_t height() const noexcept { return params_.dim(0); }
  std::size_t width() const noexcept { return params_.dim(1); }
  const Tensor& tensor() const noexcept { return params_; }

  LaplaceParams at(std::size_t row, std::size_t col) const noexcept {
    const float* p = params_.data() + (row * width() + col) * 2;
    return {p[0], p[1]};
  }

 private:
  Tensor params_;
};

/// One sparse ground-truth depth sample at an integer pixel.
struct DepthSample {
  std::size_t row = 0;
  std::size_t col = 0;
  double depth = 0.0;
};

enum class NllReduction { kSum, kMean };

/// Sum (or mean) over samples of log(2b) + |d_gt - mu| / b with parameters
/// read at the integer pixel. Throws DomainError on an empty set,
/// out-of-image pixels or nonpositive depths.
double depth_nll(const DepthParamMap& params, std::span<const DepthSample> gt,
                 NllReduction reduction = NllReduction::kSum);

/// Converts an N x 3 tensor of (row, col, depth) rows.
std::vector<DepthSample> depth_samples_from_tensor(const Tensor& t);
Tensor depth_samples_to_tensor(std::span<const DepthSample> samples);

}  // namespace pdbev
