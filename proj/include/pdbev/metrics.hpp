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

#include <optional>
#include <string>

#include "pdbev/tensor.hpp"

namespace pdbev {

inline constexpr double kDefaultIouThreshold = 0.5;
inline constexpr double kDefaultTau = 0.5;

/// |P & G| / |P | G| after binarizing both masks at `threshold` (>=).
/// Empty union gives nullopt. Throws DomainError on a dims mismatch.
std::optional<double> iou(const Tensor& pred, const Tensor& gt, double threshold = kDefaultIouThreshold);

struct VisReport {
  std::optional<double> iou_all;
  std::optional<double> iou_vis;
  std::optional<double> iou_occ;
  /// Percent of ground-truth positive cells with V >= tau_vis / V < tau_occ.
  /// Absent when the ground truth has no positive cell.
  std::optional<double> visible_rate;
  std::optional<double> occluded_rate;
};

/// Splits pred and gt into the visible region (V >= tau_vis) and occluded
/// region (V < tau_occ) and scores each separately. Requires
/// 0 <= tau_occ <= tau_vis <= 1.
VisReport visibility_iou(const Tensor& pred, const Tensor& gt, const Tensor& vis, double tau_vis = kDefaultTau,
                         double tau_occ = kDefaultTau, double threshold = kDefaultIouThreshold);

/// Fixed-order JSON: {"iou", "iou_vis", "iou_occ", "visible_rate", "occluded_rate"}; absent values are null.
std::string to_json(const VisReport& report);

struct SegLossOptions {
  double beta_dice = 1.0;
  double beta_bce = 1.0;
  double dice_smooth = 1.0;
  double prob_clamp = 1e-7;
};

/// beta_dice * (1 - (2 sum pg + eps) / (sum p + sum g + eps)) + beta_bce * mean BCE,
/// with probabilities clamped to [prob_clamp, 1 - prob_clamp] inside the BCE logs.
double seg_loss(const Tensor& pred, const Tensor& gt, const SegLossOptions& opt = {});

}  // namespace pdbev
