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

#include "pdbev/depth_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pdbev/errors.hpp"

namespace pdbev {

LaplaceParams LaplaceParams::clamped(double mu, double b) {
  if (!(mu > 0.0) || !std::isfinite(mu)) throw DomainError("Laplace mu must be positive and finite");
  if (!std::isfinite(b)) throw DomainError("Laplace b must be finite");
  return {mu, std::max(b, kMinDiversity)};
}

bool LaplaceParams::valid() const noexcept {
  return mu > 0.0 && std::isfinite(mu) && b >= kMinDiversity && std::isfinite(b);
}

double laplace_pdf(double d, const LaplaceParams& prm) noexcept {
  return std::exp(-std::abs(d - prm.mu) / prm.b) / (2.0 * prm.b);
}

double laplace_cdf(double x, const LaplaceParams& prm) noexcept {
  if (x < prm.mu) return 0.5 * std::exp((x - prm.mu) / prm.b);
  return 1.0 - 0.5 * std::exp(-(x - prm.mu) / prm.b);
}

double occlusion_prob(double d, const LaplaceParams& prm) noexcept {
  // Both terms go through the same expression so that B(0) is exactly 0.
  return std::max(0.0, laplace_cdf(d, prm) - laplace_cdf(0.0, prm));
}

double visibility_prob(double d, const LaplaceParams& prm) noexcept { return 1.0 - occlusion_prob(d, prm); }

NllGrad depth_nll_grad(const LaplaceParams& prm, double d_gt) noexcept {
  const double r = d_gt - prm.mu;
  NllGrad g;
  if (r > 0.0) {
    g.d_mu = -1.0 / prm.b;
  } else if (r < 0.0) {
    g.d_mu = 1.0 / prm.b;
  }
  g.d_b = 1.0 / prm.b - std::abs(r) / (prm.b * prm.b);
  return g;
}

DepthParamMap::DepthParamMap(Tensor params) : params_(std::move(params)) {
  if (params_.rank() != 3 || params_.dim(2) != 2) {
    throw DomainError("depth parameter map must be H x W x 2, got " + dims_to_string(params_.dims()));
  }
  const std::size_t n = params_.size() / 2;
  for (std::size_t i = 0; i < n; ++i) {
    const float mu = params_[2 * i];
    const float b = params_[2 * i + 1];
    if (!(mu > 0.0f) || !std::isfinite(mu)) {
      throw DomainError("depth parameter map: mu must be positive at pixel " + std::to_string(i));
    }
    // Stored as float; accept the float rounding of kMinDiversity.
    if (!(b >= static_cast<float>(kMinDiversity)) || !std::isfinite(b)) {
      throw DomainError("depth parameter map: b below minimum at pixel " + std::to_string(i));
    }
  }
}

DepthParamMap DepthParamMap::from_mu(const Tensor& mu, double b) {
  require_rank(mu, 2, "depth map");
  if (!std::isfinite(b)) throw DomainError("diversity must be finite");
  const float bf = static_cast<float>(std::max(b, kMinDiversity));
  Tensor t({mu.dim(0), mu.dim(1), 2});
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (!(mu[i] > 0.0f) || !std::isfinite(mu[i])) {
      throw DomainError("depth must be positive, got " + std::to_string(mu[i]) + " at pixel " + std::to_string(i));
    }
    t[2 * i] = mu[i];
    t[2 * i + 1] = bf;
  }
  return DepthParamMap(std::move(t));
}

double depth_nll(const DepthParamMap& params, std::span<const DepthSample> gt, NllReduction reduction) {
  if (gt.empty()) throw DomainError("depth_nll: empty ground-truth set");
  double total = 0.0;
  for (const auto& s : gt) {
    if (s.row >= params.height() || s.col >= params.width()) {
      throw DomainError("depth_nll: sample pixel (" + std::to_string(s.row) + ", " + std::to_string(s.col) +
                        ") outside image");
    }
    if (!(s.depth > 0.0) || !std::isfinite(s.depth)) throw DomainError("depth_nll: depth must be positive");
    const LaplaceParams p = params.at(s.row, s.col);
    total += std::log(2.0 * p.b) + std::abs(s.depth - p.mu) / p.b;
  }
  if (reduction == NllReduction::kMean) total /= static_cast<double>(gt.size());
  return total;
}

std::vector<DepthSample> depth_samples_from_tensor(const Tensor& t) {
  if (t.rank() != 2 || t.dim(1) != 3) throw DomainError("sparse depth must be N x 3, got " + dims_to_string(t.dims()));
  std::vector<DepthSample> out;
  out.reserve(t.dim(0));
  for (std::size_t i = 0; i < t.dim(0); ++i) {
    const float r = t[3 * i];
    const float c = t[3 * i + 1];
    if (!(r >= 0.0f) || !(c >= 0.0f) || r != std::floor(r) || c != std::floor(c)) {
      throw DomainError("sparse depth row " + std::to_string(i) + ": pixel must be a nonnegative integer");
    }
    out.push_back({static_cast<std::size_t>(r), static_cast<std::size_t>(c), t[3 * i + 2]});
  }
  return out;
}

Tensor depth_samples_to_tensor(std::span<const DepthSample> samples) {
  if (samples.empty()) throw DomainError("no depth samples");
  Tensor t({samples.size(), 3});
  for (std::size_t i = 0; i < samples.size(); ++i) {
    t[3 * i] = static_cast<float>(samples[i].row);
    t[3 * i + 1] = static_cast<float>(samples[i].col);
    t[3 * i + 2] = static_cast<float>(samples[i].depth);
  }
  return t;
}

}  // namespace pdbev
