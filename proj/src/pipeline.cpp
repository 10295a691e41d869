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

#include "pdbev/pipeline.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "pdbev/errors.hpp"
#include "pdbev/parallel.hpp"
#include "pdbev/synth.hpp"
#include "pdbev/tensor_io.hpp"

namespace pdbev {
namespace fs = std::filesystem;

namespace {

std::vector<CameraModel> cameras_of(const RigConfig& rig) {
  std::vector<CameraModel> out;
  out.reserve(rig.cameras.size());
  for (const auto& c : rig.cameras) out.emplace_back(c, rig.image_size);
  return out;
}

Tensor read_input(const fs::path& path) {
  if (!fs::exists(path)) throw IoError("missing input tensor: " + path.string());
  return read_tensor(path);
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory: " + dir.string());
}

void require_volume(const Tensor& t, const GridConfig& grid, std::size_t rank, const std::string& what) {
  require_rank(t, rank, what);
  for (int a = 0; a < 3; ++a) {
    if (t.dim(a) != grid.counts[a]) {
      throw DomainError(what + ": dims " + dims_to_string(t.dims()) + " do not match grid counts");
    }
  }
}

std::vector<ViewInput> load_views(const RigConfig& rig, const fs::path& dir) {
  std::vector<ViewInput> views;
  for (const auto& cam : cameras_of(rig)) {
    Tensor feat = read_input(dir / files::feat(cam.name()));
    DepthParamMap depth(read_input(dir / files::depth(cam.name())));
    views.emplace_back(std::move(feat), std::move(depth), cam);
  }
  return views;
}

std::vector<DepthView> load_depth_views(const RigConfig& rig, const fs::path& dir) {
  std::vector<DepthView> views;
  for (const auto& cam : cameras_of(rig)) {
    views.push_back({DepthParamMap(read_input(dir / files::depth(cam.name()))), cam});
  }
  return views;
}

void write_synth(const SynthResult& r, const fs::path& dir) {
  ensure_dir(dir);
  for (const auto& v : r.views) {
    write_tensor(dir / files::dense(v.name), v.dense);
    write_tensor(dir / files::depth(v.name), v.params);
    write_tensor(dir / files::feat(v.name), v.features);
    write_tensor(dir / files::sparse(v.name), v.sparse);
    write_tensor(dir / files::view_vis(v.name), v.visibility);
  }
  write_tensor(dir / files::kGtSeg, r.gt_seg);
  write_tensor(dir / files::kGtVis, r.gt_vis);
}

struct LiftOutputs {
  Tensor features;
  std::optional<Tensor> likelihood;
};

LiftOutputs lift_views(std::span<const ViewInput> views, const VoxelGrid& grid, LiftMode mode, unsigned threads) {
  if (mode == LiftMode::kUniform) return {lift_uniform(views, grid, threads), std::nullopt};
  LiftResult r = lift(views, grid, threads);
  return {std::move(r.features), std::move(r.likelihood)};
}

void write_aggregate(const AggregateResult& r, const fs::path& dir) {
  ensure_dir(dir);
  if (!r.occupancy.empty()) write_tensor(dir / files::kOcc3d, r.occupancy);
  write_tensor(dir / files::kBevFeat, r.bev);
}

}  // namespace

SynthResult synthesize(const Scene& scene, const RigConfig& rig, const GridConfig& grid, double b_gt,
                       unsigned threads) {
  validate(scene);
  validate(rig);
  validate_against(scene, grid);
  const VoxelGrid vgrid(grid);
  SynthResult r;
  std::vector<DenseDepthView> dense_views;
  for (const auto& cam : cameras_of(rig)) {
    ViewArtifacts v;
    v.name = cam.name();
    v.dense = raycast_depth(scene, cam);
    v.params = delta_params(v.dense, b_gt).tensor();
    v.features = synth_features(scene, cam);
    v.sparse = depth_samples_to_tensor(sparse_depth(v.dense, kSparseStride));
    const DenseDepthView single{v.dense, cam};
    v.visibility = gt_visibility(std::span(&single, 1), vgrid, b_gt, threads);
    dense_views.push_back(single);
    r.views.push_back(std::move(v));
  }
  r.gt_seg = render_gt_bev(scene, grid);
  r.gt_vis = gt_visibility(dense_views, vgrid, b_gt, threads);
  return r;
}

AggregateResult aggregate(const Tensor& feat3d, const Tensor* lik3d, const GridConfig& grid, AggregateMode mode,
                          double bias) {
  require_volume(feat3d, grid, 4, "feature volume");
  AggregateResult r;
  if (mode == AggregateMode::kConcat) {
    r.bev = to_bev_grid(concat_pillars(feat3d), grid);
    return r;
  }
  if (!lik3d) throw DomainError("occupancy aggregation needs a likelihood volume (lift with geometry mode)");
  require_volume(*lik3d, grid, 3, "likelihood volume");
  r.occupancy = occupancy(*lik3d, bias);
  r.bev = to_bev_grid(compress(feat3d, r.occupancy), grid);
  return r;
}

Tensor prediction_from(const Tensor& bev, std::size_t seg_channel, std::size_t mass_channel, std::size_t block_width) {
  if (bev.rank() == 2) return bev;
  return ratio_readout(bev, seg_channel, mass_channel, block_width);
}

VisReport run_pipeline(const Scene& scene, const RigConfig& rig, const GridConfig& grid, const PipelineOptions& opt,
                       const fs::path& out_dir) {
  const VoxelGrid vgrid(grid);
  const SynthResult synth = synthesize(scene, rig, grid, opt.b_gt, opt.threads);

  std::vector<ViewInput> views;
  std::vector<DepthView> depth_views;
  const auto cams = cameras_of(rig);
  for (std::size_t i = 0; i < cams.size(); ++i) {
    views.emplace_back(synth.views[i].features, DepthParamMap(synth.views[i].params), cams[i]);
    depth_views.push_back({DepthParamMap(synth.views[i].params), cams[i]});
  }
  const LiftOutputs lifted = lift_views(views, vgrid, opt.lift_mode, opt.threads);
  const AggregateResult agg = aggregate(lifted.features, lifted.likelihood ? &*lifted.likelihood : nullptr, grid,
                                        opt.aggregate_mode, opt.bias);
  const Tensor vis_bev = visibility_bev(visibility_volume(depth_views, vgrid, opt.threads), grid);
  const std::size_t block = opt.aggregate_mode == AggregateMode::kConcat ? kFeatureChannels : 0;
  const Tensor pred = prediction_from(agg.bev, kRoadChannel, kMassChannel, block);
  const VisReport report = visibility_iou(pred, synth.gt_seg, synth.gt_vis, opt.tau_vis, opt.tau_occ, opt.iou_threshold);

  write_synth(synth, out_dir);
  write_tensor(out_dir / files::kFeat3d, lifted.features);
  if (lifted.likelihood) write_tensor(out_dir / files::kLik3d, *lifted.likelihood);
  write_aggregate(agg, out_dir);
  write_tensor(out_dir / files::kVisBev, vis_bev);
  return report;
}

namespace {

struct CommonFlags {
  std::string rig;
  std::string grid;
  std::string scene;
  std::string out;
  std::string in;
  double bias = kDefaultOccupancyBias;
  double b_gt = kDefaultGtDiversity;
  double tau_vis = kDefaultTau;
  double tau_occ = kDefaultTau;
  std::optional<double> tau;
  double iou_threshold = kDefaultIouThreshold;
  std::string mode = "occupancy";
  std::string lift_mode = "geometry";
  std::optional<unsigned> threads;
  std::string pred;
  std::string gt;
  std::string vis;
  std::size_t seg_channel = kRoadChannel;
  std::size_t mass_channel = kMassChannel;
  std::size_t block_width = 0;
  std::size_t cameras = 6;
  double fov = 70.0;
  std::size_t image_h = 64;
  std::size_t image_w = 64;
  double mount_height = 1.5;

  fs::path in_dir() const { return in.empty() ? fs::path(out) : fs::path(in); }
  double vis_threshold() const { return tau ? *tau : tau_vis; }
  double occ_threshold() const { return tau ? *tau : tau_occ; }
};

AggregateMode parse_aggregate_mode(const std::string& s) {
  if (s == "occupancy") return AggregateMode::kOccupancy;
  if (s == "concat") return AggregateMode::kConcat;
  throw ConfigError("--mode: expected occupancy|concat, got '" + s + "'");
}

LiftMode parse_lift_mode(const std::string& s) {
  if (s == "geometry") return LiftMode::kGeometry;
  if (s == "uniform") return LiftMode::kUniform;
  throw ConfigError("--lift-mode: expected geometry|uniform, got '" + s + "'");
}

void check_ranges(const CommonFlags& f) {
  if (!(f.bias >= 0.0)) throw ConfigError("--bias: must be nonnegative");
  if (!(f.b_gt > 0.0)) throw ConfigError("--b-gt: must be positive");
  const double tv = f.vis_threshold();
  const double to = f.occ_threshold();
  if (!(tv >= 0.0 && tv <= 1.0) || !(to >= 0.0 && to <= 1.0)) throw ConfigError("--tau-*: must lie in [0, 1]");
  if (to > tv) throw ConfigError("--tau-occ: must not exceed --tau-vis");
  if (!(f.iou_threshold >= 0.0 && f.iou_threshold <= 1.0)) throw ConfigError("--iou-thresh: must lie in [0, 1]");
}

int cmd_synth(const CommonFlags& f, unsigned threads) {
  const Scene scene = parse_scene(f.scene);
  const RigConfig rig = parse_rig(f.rig);
  const GridConfig grid = parse_grid(f.grid);
  write_synth(synthesize(scene, rig, grid, f.b_gt, threads), f.out);
  return 0;
}

int cmd_lift(const CommonFlags& f, unsigned threads) {
  const RigConfig rig = parse_rig(f.rig);
  const VoxelGrid grid(parse_grid(f.grid));
  const LiftMode mode = parse_lift_mode(f.lift_mode);
  const auto views = load_views(rig, f.in_dir());
  const LiftOutputs r = lift_views(views, grid, mode, threads);
  ensure_dir(f.out);
  write_tensor(fs::path(f.out) / files::kFeat3d, r.features);
  if (r.likelihood) write_tensor(fs::path(f.out) / files::kLik3d, *r.likelihood);
  return 0;
}

int cmd_aggregate(const CommonFlags& f) {
  const GridConfig grid = parse_grid(f.grid);
  const AggregateMode mode = parse_aggregate_mode(f.mode);
  const Tensor feat3d = read_input(f.in_dir() / files::kFeat3d);
  std::optional<Tensor> lik3d;
  if (mode == AggregateMode::kOccupancy) lik3d = read_input(f.in_dir() / files::kLik3d);
  write_aggregate(aggregate(feat3d, lik3d ? &*lik3d : nullptr, grid, mode, f.bias), f.out);
  return 0;
}

int cmd_visibility(const CommonFlags& f, unsigned threads) {
  const RigConfig rig = parse_rig(f.rig);
  const VoxelGrid grid(parse_grid(f.grid));
  const auto views = load_depth_views(rig, f.in_dir());
  const Tensor vis = visibility_bev(visibility_volume(views, grid, threads), grid.config());
  ensure_dir(f.out);
  write_tensor(fs::path(f.out) / files::kVisBev, vis);
  return 0;
}

int cmd_eval(const CommonFlags& f, std::ostream& out) {
  const fs::path dir = f.in_dir();
  const Tensor bev = read_input(f.pred.empty() ? dir / files::kBevFeat : fs::path(f.pred));
  const Tensor gt = read_input(f.gt.empty() ? dir / files::kGtSeg : fs::path(f.gt));
  const Tensor vis = read_input(f.vis.empty() ? dir / files::kGtVis : fs::path(f.vis));
  const Tensor pred = prediction_from(bev, f.seg_channel, f.mass_channel, f.block_width);
  const VisReport r = visibility_iou(pred, gt, vis, f.vis_threshold(), f.occ_threshold(), f.iou_threshold);
  out << to_json(r) << '\n';
  return 0;
}

int cmd_pipeline(const CommonFlags& f, unsigned threads, std::ostream& out) {
  const Scene scene = parse_scene(f.scene);
  const RigConfig rig = parse_rig(f.rig);
  const GridConfig grid = parse_grid(f.grid);
  PipelineOptions opt;
  opt.bias = f.bias;
  opt.b_gt = f.b_gt;
  opt.tau_vis = f.vis_threshold();
  opt.tau_occ = f.occ_threshold();
  opt.iou_threshold = f.iou_threshold;
  opt.lift_mode = parse_lift_mode(f.lift_mode);
  opt.aggregate_mode = parse_aggregate_mode(f.mode);
  opt.threads = threads;
  out << to_json(run_pipeline(scene, rig, grid, opt, f.out)) << '\n';
  return 0;
}

int cmd_make_rig(const CommonFlags& f) {
  const RigConfig rig = make_rig(f.cameras, f.fov, f.image_h, f.image_w, f.mount_height);
  const fs::path path(f.out);
  if (path.has_parent_path()) ensure_dir(path.parent_path());
  std::ofstream os(path);
  if (!os) throw IoError("cannot open for writing: " + path.string());
  os << to_json(rig) << '\n';
  if (!os) throw IoError("write failed: " + path.string());
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Parametric-depth BEV feature transformation toolkit", "pdbev"};
  app.require_subcommand(1);
  CommonFlags f;

  auto add_rig = [&](CLI::App* c) { c->add_option("--rig", f.rig, "Rig JSON")->required(); };
  auto add_grid = [&](CLI::App* c) { c->add_option("--grid", f.grid, "Grid JSON")->required(); };
  auto add_scene = [&](CLI::App* c) { c->add_option("--scene", f.scene, "Scene JSON")->required(); };
  auto add_out = [&](CLI::App* c) { c->add_option("--out", f.out, "Output directory")->required(); };
  auto add_in = [&](CLI::App* c) { c->add_option("--in", f.in, "Input directory (defaults to --out)"); };
  auto add_threads = [&](CLI::App* c) {
    c->add_option("--threads", f.threads, "Worker threads (falls back to PDBEV_THREADS, then 1)");
  };
  auto add_taus = [&](CLI::App* c) {
    c->add_option("--tau-vis", f.tau_vis, "Visible region: V >= tau_vis");
    c->add_option("--tau-occ", f.tau_occ, "Occluded region: V < tau_occ");
    c->add_option("--tau", f.tau, "Sets both tau_vis and tau_occ");
    c->add_option("--iou-thresh", f.iou_threshold, "Binarization threshold for predictions");
  };

  CLI::App* synth = app.add_subcommand("synth", "Render the synthetic oracle inputs and labels");
  add_scene(synth);
  add_rig(synth);
  add_grid(synth);
  add_out(synth);
  synth->add_option("--b-gt", f.b_gt, "Diversity for delta-like depth parameters (m)");
  add_threads(synth);

  CLI::App* lift_cmd = app.add_subcommand("lift", "Lift per-view features into the voxel volume");
  add_rig(lift_cmd);
  add_grid(lift_cmd);
  add_out(lift_cmd);
  add_in(lift_cmd);
  lift_cmd->add_option("--lift-mode", f.lift_mode, "geometry|uniform");
  add_threads(lift_cmd);

  CLI::App* agg = app.add_subcommand("aggregate", "Compress the feature volume onto the BEV grid");
  add_grid(agg);
  add_out(agg);
  add_in(agg);
  agg->add_option("--bias", f.bias, "Occupancy bias b_o");
  agg->add_option("--mode", f.mode, "occupancy|concat");
  add_threads(agg);

  CLI::App* vis = app.add_subcommand("visibility", "BEV visibility map from depth parameters");
  add_rig(vis);
  add_grid(vis);
  add_out(vis);
  add_in(vis);
  add_threads(vis);

  CLI::App* eval = app.add_subcommand("eval", "Visibility-aware segmentation report (JSON on stdout)");
  eval->add_option("--in", f.in, "Directory holding bev_feat/gt_seg/gt_vis");
  eval->add_option("--out", f.out, "Alias for --in");
  eval->add_option("--pred", f.pred, "Prediction tensor (X x Y mask or X x Y x C features)");
  eval->add_option("--gt", f.gt, "Ground-truth mask tensor");
  eval->add_option("--vis", f.vis, "Visibility map tensor");
  eval->add_option("--seg-channel", f.seg_channel, "Feature channel holding the segmentation indicator");
  eval->add_option("--mass-channel", f.mass_channel, "Feature channel holding the lifting weight");
  eval->add_option("--block-width", f.block_width, "Channel block width for pillar-concatenated features");
  add_taus(eval);

  CLI::App* pipe = app.add_subcommand("pipeline", "synth -> lift -> aggregate -> visibility -> eval");
  add_scene(pipe);
  add_rig(pipe);
  add_grid(pipe);
  add_out(pipe);
  pipe->add_option("--bias", f.bias, "Occupancy bias b_o");
  pipe->add_option("--b-gt", f.b_gt, "Diversity for delta-like depth parameters (m)");
  pipe->add_option("--mode", f.mode, "occupancy|concat");
  pipe->add_option("--lift-mode", f.lift_mode, "geometry|uniform");
  add_taus(pipe);
  add_threads(pipe);

  CLI::App* rig_cmd = app.add_subcommand("make-rig", "Write a yaw-divergent synthetic rig JSON");
  rig_cmd->add_option("--cameras", f.cameras, "Number of cameras");
  rig_cmd->add_option("--fov", f.fov, "Horizontal field of view (degrees)");
  rig_cmd->add_option("--height-px", f.image_h, "Image height (pixels)");
  rig_cmd->add_option("--width-px", f.image_w, "Image width (pixels)");
  rig_cmd->add_option("--mount-height", f.mount_height, "Camera height above ground (m)");
  add_out(rig_cmd);

  std::vector<const char*> argv;
  argv.push_back("pdbev");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  try {
    check_ranges(f);
    const unsigned threads = resolve_threads(f.threads);
    if (*synth) return cmd_synth(f, threads);
    if (*lift_cmd) return cmd_lift(f, threads);
    if (*agg) return cmd_aggregate(f);
    if (*vis) return cmd_visibility(f, threads);
    if (*eval) {
      if (f.in.empty() && f.out.empty() && (f.pred.empty() || f.gt.empty() || f.vis.empty())) {
        throw ConfigError("eval: pass --in DIR or all of --pred/--gt/--vis");
      }
      return cmd_eval(f, out);
    }
    if (*pipe) return cmd_pipeline(f, threads, out);
    if (*rig_cmd) return cmd_make_rig(f);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace pdbev
