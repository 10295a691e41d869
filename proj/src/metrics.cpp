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

#include "pdbev/metrics.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "pdbev/errors.hpp"
#include "pdbev/simd/kernels.hpp"

namespace pdbev {
namespace {

void check_pair(const Tensor& pred, const Tensor& gt) {
  if (pred.dims() != gt.dims()) {
    throw DomainError("mask dims mismatch: pred " + dims_to_string(pred.dims()) + " vs gt " + dims_to_string(gt.dims()));
  }
}

simd::MaskCounts counts(const Tensor& pred, const Tensor& gt, const Tensor* vis, simd::Region mode, double bound,
                        double threshold) {
  simd::MaskQuery q;
  q.pred = pred.data();
  q.gt = gt.data();
  q.region = vis ? vis->data() : nullptr;
  q.n = pred.size();
  q.pred_threshold = static_cast<float>(threshold);
  q.gt_threshold = 0.5f;
  q.mode = mode;
  q.bound = static_cast<float>(bound);
  return simd::kernels().mask_counts(q);
}

std::optional<double> ratio(const simd::MaskCounts& c) {
  if (c.uni == 0) return std::nullopt;
  return static_cast<double>(c.intersection) / static_cast<double>(c.uni);
}

}  // namespace

std::optional<double> iou(const Tensor& pred, const Tensor& gt, double threshold) {
  check_pair(pred, gt);
  return ratio(counts(pred, gt, nullptr, simd::Region::kAll, 0.0, threshold));
}

VisReport visibility_iou(const Tensor& pred, const Tensor& gt, const Tensor& vis, double tau_vis, double tau_occ,
                         double threshold) {
  check_pair(pred, gt);
  if (vis.dims() != gt.dims()) {
    throw DomainError("visibility map dims " + dims_to_string(vis.dims()) + " do not match masks " +
                      dims_to_string(gt.dims()));
  }
  if (!(tau_occ >= 0.0 && tau_vis <= 1.0)) throw DomainError("thresholds must lie in [0, 1]");
  if (tau_occ > tau_vis) throw DomainError("tau_occ must not exceed tau_vis");

  const auto all = counts(pred, gt, nullptr, simd::Region::kAll, 0.0, threshold);
  const auto seen = counts(pred, gt, &vis, simd::Region::kAtLeast, tau_vis, threshold);
  const auto hidden = counts(pred, gt, &vis, simd::Region::kBelow, tau_occ, threshold);

  VisReport r;
  r.iou_all = ratio(all);
  r.iou_vis = ratio(seen);
  r.iou_occ = ratio(hidden);
  if (all.gt_positive > 0) {
    const double n = static_cast<double>(all.gt_positive);
    r.visible_rate = 100.0 * static_cast<double>(seen.gt_positive) / n;
    // With equal thresholds the regions partition the grid; deriving one
    // rate from the other makes the pair sum to exactly 100.
    r.occluded_rate = tau_vis == tau_occ ? 100.0 - *r.visible_rate
                                         : 100.0 * static_cast<double>(hidden.gt_positive) / n;
  }
  return r;
}

std::string to_json(const VisReport& report) {
  nlohmann::ordered_json j;
  auto put = [&](const char* key, const std::optional<double>& v) {
    if (v) {
      j[key] = *v;
    } else {
      j[key] = nullptr;
    }
  };
  put("iou", report.iou_all);
  put("iou_vis", report.iou_vis);
  put("iou_occ", report.iou_occ);
  put("visible_rate", report.visible_rate);
  put("occluded_rate", report.occluded_rate);
  return j.dump();
}

double seg_loss(const Tensor& pred, const Tensor& gt, const SegLossOptions& opt) {
  check_pair(pred, gt);
  double inter = 0.0;
  double sum_p = 0.0;
  double sum_g = 0.0;
  double bce = 0.0;
  const double lo = opt.prob_clamp;
  const double hi = 1.0 - opt.prob_clamp;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double p = pred[i];
    const double g = gt[i];
    inter += p * g;
    sum_p += p;
    sum_g += g;
    const double pc = std::clamp(p, lo, hi);
    bce += -g * std::log(pc) - (1.0 - g) * std::log(1.0 - pc);
  }
  const double dice = 1.0 - (2.0 * inter + opt.dice_smooth) / (sum_p + sum_g + opt.dice_smooth);
  return opt.beta_dice * dice + opt.beta_bce * bce / static_cast<double>(pred.size());
}

}  // namespace pdbev
