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

#include "pdbev/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <Eigen/Dense>
#include <json.hpp>

#include "pdbev/errors.hpp"

namespace pdbev {
namespace {

using json = nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw ConfigError(path + ": " + msg);
}

const json& field(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) fail(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) fail(path.empty() ? key : path + "." + key, "missing field");
  return *it;
}

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  double v = j.get<double>();
  if (!std::isfinite(v)) fail(path, "must be finite");
  return v;
}

std::size_t positive_count(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  auto v = j.get<long long>();
  if (v <= 0) fail(path, "must be positive");
  return static_cast<std::size_t>(v);
}

template <int N>
Eigen::Matrix<double, N, 1> vec(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != N) fail(path, "expected an array of " + std::to_string(N) + " numbers");
  Eigen::Matrix<double, N, 1> v;
  for (int i = 0; i < N; ++i) v(i) = number(j[i], path + "[" + std::to_string(i) + "]");
  return v;
}

Eigen::Matrix3d mat3(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 3) fail(path, "expected a 3x3 array");
  Eigen::Matrix3d m;
  for (int r = 0; r < 3; ++r) m.row(r) = vec<3>(j[r], path + "[" + std::to_string(r) + "]").transpose();
  return m;
}

json json_array(const Eigen::Ref<const Eigen::VectorXd>& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

json json_rows(const Eigen::Matrix3d& m) {
  json a = json::array();
  for (int r = 0; r < 3; ++r) a.push_back(json_array(Eigen::Vector3d(m.row(r).transpose())));
  return a;
}

nlohmann::ordered_json min_max(const Eigen::Ref<const Eigen::VectorXd>& lo, const Eigen::Ref<const Eigen::VectorXd>& hi) {
  nlohmann::ordered_json o;
  o["min"] = json_array(lo);
  o["max"] = json_array(hi);
  return o;
}

json parse_text(std::string_view text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    fail(what, std::string("invalid JSON: ") + e.what());
  }
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError(path.string() + ": cannot open file");
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

bool close_rel(double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(std::abs(a), std::abs(b)); }

bool valid_camera_name(const std::string& name) {
  if (name.empty()) return false;
  for (char c : name) {
    bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' || c == '-';
    if (!ok) return false;
  }
  return true;
}

}  // namespace

void validate(const RigConfig& rig) {
  if (rig.image_size.height == 0 || rig.image_size.width == 0) fail("image_size", "extents must be positive");
  if (rig.cameras.empty()) fail("cameras", "at least one camera required");
  std::set<std::string> names;
  for (std::size_t i = 0; i < rig.cameras.size(); ++i) {
    const auto& c = rig.cameras[i];
    const std::string p = "cameras[" + std::to_string(i) + "]";
    if (!valid_camera_name(c.name)) fail(p + ".name", "must be non-empty [A-Za-z0-9_-]");
    if (!names.insert(c.name).second) fail(p + ".name", "duplicate camera name '" + c.name + "'");
    if (!c.K.allFinite() || !c.R.allFinite() || !c.T.allFinite()) fail(p, "non-finite entry");
    if (c.K(1, 0) != 0.0 || c.K(2, 0) != 0.0 || c.K(2, 1) != 0.0) fail(p + ".K", "must be upper-triangular");
    if (c.K(0, 0) <= 0.0 || c.K(1, 1) <= 0.0) fail(p + ".K", "focal entries must be positive");
    if (c.K(2, 2) <= 0.0) fail(p + ".K", "K[2][2] must be positive");
    const double ortho = (c.R.transpose() * c.R - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff();
    if (ortho > kRotationTolerance) fail(p + ".R", "not orthonormal (max |R^T R - I| = " + std::to_string(ortho) + ")");
    if (std::abs(c.R.determinant() - 1.0) > kRotationTolerance) fail(p + ".R", "determinant is not +1");
  }
}

void validate(const GridConfig& g) {
  for (int a = 0; a < 3; ++a) {
    if (g.counts[a] == 0) fail("counts[" + std::to_string(a) + "]", "must be positive");
    if (!(g.voxel_size(a) > 0.0) || !std::isfinite(g.voxel_size(a))) {
      fail("voxel_size[" + std::to_string(a) + "]", "must be positive");
    }
  }
  if (!g.origin.allFinite()) fail("origin", "must be finite");
  for (int a = 0; a < 2; ++a) {
    if (g.bev_counts[a] == 0) fail("bev_counts[" + std::to_string(a) + "]", "must be positive");
  }
  if (!(g.bev_cell > 0.0) || !std::isfinite(g.bev_cell)) fail("bev_cell", "must be positive");
  for (int a = 0; a < 2; ++a) {
    const double volume = static_cast<double>(g.counts[a]) * g.voxel_size(a);
    const double bev = static_cast<double>(g.bev_counts[a]) * g.bev_cell;
    if (!close_rel(volume, bev)) {
      fail("bev_counts[" + std::to_string(a) + "]",
           "BEV footprint " + std::to_string(bev) + " m != volume footprint " + std::to_string(volume) + " m");
    }
  }
}

void validate(const Scene& s) {
  for (std::size_t i = 0; i < s.occluders.size(); ++i) {
    const auto& b = s.occluders[i];
    if (!b.min.allFinite() || !b.max.allFinite() || !(b.min.array() < b.max.array()).all()) {
      fail("occluders[" + std::to_string(i) + "]", "min must be < max on every axis");
    }
  }
  for (std::size_t i = 0; i < s.road_rects.size(); ++i) {
    const auto& r = s.road_rects[i];
    if (!r.min.allFinite() || !r.max.allFinite() || !(r.min.array() < r.max.array()).all()) {
      fail("road_rects[" + std::to_string(i) + "]", "min must be < max on every axis");
    }
  }
}

void validate_against(const Scene& s, const GridConfig& g) {
  const Eigen::Vector2d lo = g.origin.head<2>();
  const Eigen::Vector2d hi(lo.x() + g.bev_counts[0] * g.bev_cell, lo.y() + g.bev_counts[1] * g.bev_cell);
  for (std::size_t i = 0; i < s.road_rects.size(); ++i) {
    const auto& r = s.road_rects[i];
    if ((r.min.array() < lo.array() - 1e-9).any() || (r.max.array() > hi.array() + 1e-9).any()) {
      fail("road_rects[" + std::to_string(i) + "]", "outside the grid footprint");
    }
  }
}

RigConfig parse_rig_json(std::string_view text) {
  const json j = parse_text(text, "rig");
  RigConfig rig;
  const json& size = field(j, "image_size", "");
  if (!size.is_array() || size.size() != 2) fail("image_size", "expected [H, W]");
  rig.image_size.height = positive_count(size[0], "image_size[0]");
  rig.image_size.width = positive_count(size[1], "image_size[1]");
  const json& cams = field(j, "cameras", "");
  if (!cams.is_array()) fail("cameras", "expected an array");
  for (std::size_t i = 0; i < cams.size(); ++i) {
    const std::string p = "cameras[" + std::to_string(i) + "]";
    CameraSpec c;
    const json& name = field(cams[i], "name", p);
    if (!name.is_string()) fail(p + ".name", "expected a string");
    c.name = name.get<std::string>();
    c.K = mat3(field(cams[i], "K", p), join(p, "K"));
    c.R = mat3(field(cams[i], "R", p), join(p, "R"));
    c.T = vec<3>(field(cams[i], "T", p), join(p, "T"));
    rig.cameras.push_back(std::move(c));
  }
  validate(rig);
  return rig;
}

GridConfig parse_grid_json(std::string_view text) {
  const json j = parse_text(text, "grid");
  GridConfig g;
  g.origin = vec<3>(field(j, "origin", ""), "origin");
  const json& counts = field(j, "counts", "");
  if (!counts.is_array() || counts.size() != 3) fail("counts", "expected [X', Y', Z']");
  for (int a = 0; a < 3; ++a) g.counts[a] = positive_count(counts[a], "counts[" + std::to_string(a) + "]");
  g.voxel_size = vec<3>(field(j, "voxel_size", ""), "voxel_size");
  const json& bev = field(j, "bev_counts", "");
  if (!bev.is_array() || bev.size() != 2) fail("bev_counts", "expected [X, Y]");
  for (int a = 0; a < 2; ++a) g.bev_counts[a] = positive_count(bev[a], "bev_counts[" + std::to_string(a) + "]");
  g.bev_cell = number(field(j, "bev_cell", ""), "bev_cell");
  validate(g);
  return g;
}

Scene parse_scene_json(std::string_view text) {
  const json j = parse_text(text, "scene");
  Scene s;
  const json& occ = field(j, "occluders", "");
  if (!occ.is_array()) fail("occluders", "expected an array");
  for (std::size_t i = 0; i < occ.size(); ++i) {
    const std::string p = "occluders[" + std::to_string(i) + "]";
    s.occluders.push_back({vec<3>(field(occ[i], "min", p), p + ".min"), vec<3>(field(occ[i], "max", p), p + ".max")});
  }
  const json& roads = field(j, "road_rects", "");
  if (!roads.is_array()) fail("road_rects", "expected an array");
  for (std::size_t i = 0; i < roads.size(); ++i) {
    const std::string p = "road_rects[" + std::to_string(i) + "]";
    s.road_rects.push_back(
        {vec<2>(field(roads[i], "min", p), p + ".min"), vec<2>(field(roads[i], "max", p), p + ".max")});
  }
  const json& ground = field(j, "ground", "");
  if (!ground.is_boolean()) fail("ground", "expected a boolean");
  s.has_ground = ground.get<bool>();
  validate(s);
  return s;
}

RigConfig parse_rig(const std::filesystem::path& path) {
  try {
    return parse_rig_json(slurp(path));
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

GridConfig parse_grid(const std::filesystem::path& path) {
  try {
    return parse_grid_json(slurp(path));
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

Scene parse_scene(const std::filesystem::path& path) {
  try {
    return parse_scene_json(slurp(path));
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::string to_json(const RigConfig& rig) {
  nlohmann::ordered_json j;
  j["image_size"] = {rig.image_size.height, rig.image_size.width};
  j["cameras"] = nlohmann::ordered_json::array();
  for (const auto& c : rig.cameras) {
    nlohmann::ordered_json cj;
    cj["name"] = c.name;
    cj["K"] = json_rows(c.K);
    cj["R"] = json_rows(c.R);
    cj["T"] = json_array(c.T);
    j["cameras"].push_back(cj);
  }
  return j.dump(2);
}

std::string to_json(const GridConfig& g) {
  nlohmann::ordered_json j;
  j["origin"] = json_array(g.origin);
  j["counts"] = {g.counts[0], g.counts[1], g.counts[2]};
  j["voxel_size"] = json_array(g.voxel_size);
  j["bev_counts"] = {g.bev_counts[0], g.bev_counts[1]};
  j["bev_cell"] = g.bev_cell;
  return j.dump(2);
}

std::string to_json(const Scene& s) {
  nlohmann::ordered_json j;
  j["occluders"] = nlohmann::ordered_json::array();
  for (const auto& b : s.occluders) j["occluders"].push_back(min_max(b.min, b.max));
  j["road_rects"] = nlohmann::ordered_json::array();
  for (const auto& r : s.road_rects) j["road_rects"].push_back(min_max(r.min, r.max));
  j["ground"] = s.has_ground;
  return j.dump(2);
}

}  // namespace pdbev
