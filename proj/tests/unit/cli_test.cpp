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

#include <fstream>
#include <iterator>
#include <set>
#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "pdbev/pipeline.hpp"
#include "pdbev/tensor_io.hpp"
#include "test_support.hpp"

namespace pdbev {
namespace {

namespace fs = std::filesystem;

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> config_args(const std::string& fixture, bool scene = true) {
  const fs::path d = test::fixture_dir(fixture);
  std::vector<std::string> a{"--rig", (d / "rig.json").string(), "--grid", (d / "grid.json").string()};
  if (scene) {
    a.push_back("--scene");
    a.push_back((d / "scene.json").string());
  }
  return a;
}

std::vector<std::string> cmd(const std::string& sub, std::vector<std::string> tail,
                             std::initializer_list<std::string> extra = {}) {
  tail.insert(tail.begin(), sub);
  tail.insert(tail.end(), extra);
  return tail;
}

std::set<std::string> listing(const fs::path& dir) {
  std::set<std::string> names;
  for (const auto& e : fs::directory_iterator(dir)) names.insert(e.path().filename().string());
  return names;
}

std::string bytes(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

TEST(Cli, SynthWritesManifest) {
  test::TempDir out;
  const CliRun r = cli(cmd("synth", config_args("wall"), {"--out", out.path().string()}));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(listing(out.path()), (std::set<std::string>{"dense_cam0.pdbt", "depth_cam0.pdbt", "feat_cam0.pdbt",
                                                        "sparse_cam0.pdbt", "vis_cam0.pdbt", "gt_seg.pdbt",
                                                        "gt_vis.pdbt"}));
  EXPECT_EQ(read_tensor(out / "depth_cam0.pdbt").dims(), (Dims{64, 64, 2}));
  EXPECT_EQ(read_tensor(out / "feat_cam0.pdbt").dims(), (Dims{64, 64, 4}));
  EXPECT_EQ(read_tensor(out / "sparse_cam0.pdbt").dims(), (Dims{256, 3}));
  EXPECT_EQ(read_tensor(out / "gt_vis.pdbt").dims(), (Dims{32, 32}));
}

TEST(Cli, SynthIsByteDeterministic) {
  test::TempDir a, b;
  ASSERT_EQ(cli(cmd("synth", config_args("road_wall"), {"--out", a.path().string()})).code, 0);
  ASSERT_EQ(cli(cmd("synth", config_args("road_wall"), {"--out", b.path().string(), "--threads", "4"})).code, 0);
  for (const auto& name : listing(a.path())) EXPECT_EQ(bytes(a / name), bytes(b / name)) << name;
}

TEST(Cli, MissingSceneIsConfigError) {
  test::TempDir out;
  auto args = config_args("wall", false);
  args.insert(args.end(), {"--scene", (out / "absent_scene.json").string(), "--out", (out / "o").string()});
  const CliRun r = cli(cmd("synth", args));
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("absent_scene.json"), std::string::npos) << r.err;
  EXPECT_FALSE(fs::exists(out / "o"));
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(cli({}).code, 2);
  EXPECT_EQ(cli({"frobnicate"}).code, 2);
  EXPECT_EQ(cli({"synth"}).code, 2);
  EXPECT_EQ(cli({"--help"}).code, 0);
  test::TempDir out;
  EXPECT_EQ(cli(cmd("pipeline", config_args("wall"), {"--out", out.path().string(), "--mode", "sideways"})).code, 2);
  EXPECT_EQ(cli(cmd("pipeline", config_args("wall"), {"--out", out.path().string(), "--bias", "-1"})).code, 2);
  EXPECT_EQ(
      cli(cmd("pipeline", config_args("wall"), {"--out", out.path().string(), "--tau-vis", "0.2", "--tau-occ", "0.6"}))
          .code,
      2);
  EXPECT_EQ(cli(cmd("pipeline", config_args("wall"), {"--out", out.path().string(), "--threads", "x"})).code, 2);
  EXPECT_TRUE(fs::is_empty(out.path()));
}

// Runs the staged commands into `dir` and returns eval's stdout.
std::string staged(const fs::path& dir, const std::string& fixture, std::initializer_list<std::string> agg_flags = {},
                   std::initializer_list<std::string> eval_flags = {}) {
  const std::string d = dir.string();
  EXPECT_EQ(cli(cmd("synth", config_args(fixture), {"--out", d})).code, 0);
  EXPECT_EQ(cli(cmd("lift", config_args(fixture, false), {"--out", d})).code, 0);
  auto agg = cmd("aggregate", {"--grid", (test::fixture_dir(fixture) / "grid.json").string(), "--out", d});
  agg.insert(agg.end(), agg_flags);
  EXPECT_EQ(cli(agg).code, 0);
  EXPECT_EQ(cli(cmd("visibility", config_args(fixture, false), {"--out", d})).code, 0);
  auto ev = cmd("eval", {"--in", d});
  ev.insert(ev.end(), eval_flags);
  const CliRun r = cli(ev);
  EXPECT_EQ(r.code, 0) << r.err;
  return r.out;
}

TEST(Cli, StagedMatchesSingleShot) {
  test::TempDir a, b;
  const std::string s = staged(a.path(), "road_wall");
  const CliRun p = cli(cmd("pipeline", config_args("road_wall"), {"--out", b.path().string()}));
  ASSERT_EQ(p.code, 0) << p.err;
  EXPECT_EQ(s, p.out);
  EXPECT_EQ(listing(a.path()), listing(b.path()));
  for (const auto& name : listing(a.path())) EXPECT_EQ(bytes(a / name), bytes(b / name)) << name;

  const auto j = nlohmann::json::parse(p.out);
  EXPECT_GT(j["iou_vis"].get<double>(), 0.9);
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  EXPECT_EQ(p.out.find("\"iou\""), 1u);
  EXPECT_LT(p.out.find("iou_vis"), p.out.find("iou_occ"));
  EXPECT_LT(p.out.find("iou_occ"), p.out.find("visible_rate"));
  EXPECT_LT(p.out.find("visible_rate"), p.out.find("occluded_rate"));
}

TEST(Cli, PipelineIsDeterministicAcrossThreads) {
  test::TempDir a, b;
  const CliRun r1 = cli(cmd("pipeline", config_args("road_wall"), {"--out", a.path().string(), "--threads", "1"}));
  const CliRun r2 = cli(cmd("pipeline", config_args("road_wall"), {"--out", b.path().string(), "--threads", "5"}));
  ASSERT_EQ(r1.code, 0);
  EXPECT_EQ(r1.out, r2.out);
  for (const auto& name : listing(a.path())) EXPECT_EQ(bytes(a / name), bytes(b / name)) << name;
}

TEST(Cli, ConcatModeChannelCount) {
  test::TempDir a;
  const std::string out = staged(a.path(), "road_wall", {"--mode", "concat"}, {"--block-width", "4"});
  EXPECT_EQ(read_tensor(a / "bev_feat.pdbt").dims(), (Dims{32, 32, 4 * 8}));
  EXPECT_FALSE(fs::exists(a / "occ3d.pdbt"));
  test::TempDir b;
  const CliRun p = cli(cmd("pipeline", config_args("road_wall"), {"--out", b.path().string(), "--mode", "concat"}));
  ASSERT_EQ(p.code, 0);
  EXPECT_EQ(p.out, out);
}

TEST(Cli, EvalWithFullVisibilityReducesToIou) {
  test::TempDir a;
  staged(a.path(), "road_wall");
  write_tensor(a / "ones.pdbt", test::filled({32, 32}, 1.0f));
  const CliRun r = cli({"eval", "--in", a.path().string(), "--vis", (a / "ones.pdbt").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j["iou_vis"].get<double>(), j["iou"].get<double>(), 1e-9);
  EXPECT_TRUE(j["iou_occ"].is_null());
  EXPECT_EQ(j["visible_rate"].get<double>(), 100.0);
}

TEST(Cli, TauZeroEmptiesOccludedRegion) {
  test::TempDir a;
  const auto j = nlohmann::json::parse(staged(a.path(), "road_wall", {}, {"--tau", "0.0"}));
  EXPECT_TRUE(j["iou_occ"].is_null());
  EXPECT_EQ(j["occluded_rate"].get<double>(), 0.0);
  EXPECT_EQ(j["visible_rate"].get<double>(), 100.0);
}

TEST(Cli, UniformLiftWritesNoLikelihood) {
  test::TempDir a;
  const std::string d = a.path().string();
  ASSERT_EQ(cli(cmd("synth", config_args("wall"), {"--out", d})).code, 0);
  ASSERT_EQ(cli(cmd("lift", config_args("wall", false), {"--out", d, "--lift-mode", "uniform"})).code, 0);
  EXPECT_TRUE(fs::exists(a / "feat3d.pdbt"));
  EXPECT_FALSE(fs::exists(a / "lik3d.pdbt"));
  const CliRun occ = cli({"aggregate", "--grid", (test::fixture_dir("wall") / "grid.json").string(), "--out", d});
  EXPECT_EQ(occ.code, 2);
  EXPECT_NE(occ.err.find("lik3d.pdbt"), std::string::npos);
  EXPECT_EQ(cli({"aggregate", "--grid", (test::fixture_dir("wall") / "grid.json").string(), "--out", d, "--mode",
                 "concat"})
                .code,
            0);
}

TEST(Cli, ShapeMismatchIsDomainErrorWithoutOutput) {
  test::TempDir a, b;
  const std::string d = a.path().string();
  ASSERT_EQ(cli(cmd("synth", config_args("wall"), {"--out", d})).code, 0);
  ASSERT_EQ(cli(cmd("lift", config_args("wall", false), {"--out", d})).code, 0);
  // Aggregate the wall volume against the road grid (different Z').
  const CliRun r = cli({"aggregate", "--grid", (test::fixture_dir("road_wall") / "grid.json").string(), "--in", d,
                     "--out", b.path().string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_FALSE(r.err.empty());
  EXPECT_TRUE(fs::is_empty(b.path()));
  // Eval with mismatched masks.
  ASSERT_EQ(cli({"aggregate", "--grid", (test::fixture_dir("wall") / "grid.json").string(), "--out", d}).code, 0);
  write_tensor(b / "small.pdbt", Tensor({4, 4}));
  EXPECT_EQ(cli({"eval", "--in", d, "--gt", (b / "small.pdbt").string()}).code, 1);
  // Lift with the wrong rig for the synthesized views.
  const CliRun lr = cli({"lift", "--rig", (test::fixture_dir("road_wall") / "rig.json").string(), "--grid",
                      (test::fixture_dir("wall") / "grid.json").string(), "--in", d, "--out", b.path().string()});
  EXPECT_EQ(lr.code, 2);  // depth_cam1.pdbt is missing
}

TEST(Cli, MakeRigRoundTrips) {
  test::TempDir a;
  ASSERT_EQ(cli({"make-rig", "--cameras", "6", "--fov", "70", "--out", (a / "rig.json").string()}).code, 0);
  const RigConfig rig = parse_rig(a / "rig.json");
  EXPECT_EQ(rig.cameras.size(), 6u);
}

}  // namespace
}  // namespace pdbev
