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

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "pdbev/aggregation.hpp"
#include "pdbev/config.hpp"
#include "pdbev/lifting.hpp"
#include "pdbev/metrics.hpp"
#include "pdbev/visibility.hpp"

namespace pdbev {

// Artifact file names shared by the staged commands and the one-shot pipeline.
namespace files {
inline std::string dense(const std::string& cam) { return "dense_" + cam + ".pdbt"; }
inline std::string depth(const std::string& cam) { return "depth_" + cam + ".pdbt"; }
inline std::string feat(const std::string& cam) { return "feat_" + cam + ".pdbt"; }
inline std::string sparse(const std::string& cam) { return "sparse_" + cam + ".pdbt"; }
inline std::string view_vis(const std::string& cam) { return "vis_" + cam + ".pdbt"; }
inline constexpr const char* kGtSeg = "gt_seg.pdbt";
inline constexpr const char* kGtVis = "gt_vis.pdbt";
inline constexpr const char* kFeat3d = "feat3d.pdbt";
inline constexpr const char* kLik3d = "lik3d.pdbt";
inline constexpr const char* kOcc3d = "occ3d.pdbt";
inline constexpr const char* kBevFeat = "bev_feat.pdbt";
inline constexpr const char* kVisBev = "vis_bev.pdbt";
}  // namespace files

enum class LiftMode { kGeometry, kUniform };
enum class AggregateMode { kOccupancy, kConcat };

/// Stride of the lidar-like sparse depth written next to each view.
inline constexpr std::size_t kSparseStride = 4;

struct ViewArtifacts {
  std::string name;
  Tensor dense;     // H x W
  Tensor params;    // H x W x 2
  Tensor features;  // H x W x 4
  Tensor sparse;    // N x 3
  Tensor visibility;  // X x Y, this camera alone
};

struct SynthResult {
  std::vector<ViewArtifacts> views;
  Tensor gt_seg;  // X x Y
  Tensor gt_vis;  // X x Y
};

SynthResult synthesize(const Scene& scene, const RigConfig& rig, const GridConfig& grid, double b_gt,
                       unsigned threads);

struct AggregateResult {
  Tensor occupancy;  // empty in concat mode
  Tensor bev;        // X x Y x C
};

AggregateResult aggregate(const Tensor& feat3d, const Tensor* lik3d, const GridConfig& grid, AggregateMode mode,
                          double bias);

struct PipelineOptions {
  double bias = kDefaultOccupancyBias;
  double b_gt = kDefaultGtDiversity;
  double tau_vis = kDefaultTau;
  double tau_occ = kDefaultTau;
  double iou_threshold = kDefaultIouThreshold;
  LiftMode lift_mode = LiftMode::kGeometry;
  AggregateMode aggregate_mode = AggregateMode::kOccupancy;
  unsigned threads = 1;
};

/// Soft segmentation read out of a BEV feature map (road / mass channels of
/// the synthetic feature layout). A rank-2 input is already a mask.
Tensor prediction_from(const Tensor& bev, std::size_t seg_channel, std::size_t mass_channel, std::size_t block_width);

/// Runs synth -> lift -> aggregate -> visibility -> eval in memory, writes
/// every artifact under `out_dir` and returns the report.
VisReport run_pipeline(const Scene& scene, const RigConfig& rig, const GridConfig& grid, const PipelineOptions& opt,
                       const std::filesystem::path& out_dir);

/// Command-line entry point. Exit status: 0 success, 1 computation error,
/// 2 usage or configuration error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pdbev
