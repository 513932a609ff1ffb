// Copyright 2026 The SPF Toolkit Authors
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

#include "spf/core/io.hpp"

#include "spf/core/error.hpp"

#include "json.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>
#include <unordered_map>

namespace spf
{

namespace fs = std::filesystem;
using nlohmann::json;

namespace
{

constexpr std::size_t kKittiRecordBytes = 16;

std::vector<std::uint8_t> read_bytes(const fs::path & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error("cannot open '" + path.string() + "' for reading");
  }
  std::vector<std::uint8_t> bytes(
    (std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) {
    throw Error("read failure on '" + path.string() + "'");
  }
  return bytes;
}

std::string read_text(const fs::path & path)
{
  std::ifstream in(path);
  if (!in) {
    throw Error("cannot open '" + path.string() + "' for reading");
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

float load_f32_le(const std::uint8_t * p)
{
  const std::uint32_t bits = static_cast<std::uint32_t>(p[0]) |
                             (static_cast<std::uint32_t>(p[1]) << 8) |
                             (static_cast<std::uint32_t>(p[2]) << 16) |
                             (static_cast<std::uint32_t>(p[3]) << 24);
  return std::bit_cast<float>(bits);
}

void store_f32_le(float value, std::uint8_t * p)
{
  const auto bits = std::bit_cast<std::uint32_t>(value);
  p[0] = static_cast<std::uint8_t>(bits);
  p[1] = static_cast<std::uint8_t>(bits >> 8);
  p[2] = static_cast<std::uint8_t>(bits >> 16);
  p[3] = static_cast<std::uint8_t>(bits >> 24);
}

PointCloud load_ply_ascii(const fs::path & path)
{
  std::istringstream in(read_text(path));
  std::string line;
  int line_no = 0;
  auto fail = [&](const std::string & why) {
    throw Error(path.string() + ":" + std::to_string(line_no) + ": " + why);
  };

  auto next_line = [&]() -> bool {
    if (!std::getline(in, line)) {
      return false;
    }
    ++line_no;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    return true;
  };

  if (!next_line() || line != "ply") {
    fail("missing 'ply' magic");
  }
  std::size_t vertex_count = 0;
  bool in_vertex = false;
  bool seen_vertex = false;
  std::vector<std::string> vertex_props;
  while (true) {
    if (!next_line()) {
      fail("header not terminated by end_header");
    }
    std::istringstream words(line);
    std::string key;
    words >> key;
    if (key == "end_header") {
      break;
    }
    if (key == "format") {
      std::string fmt;
      words >> fmt;
      if (fmt != "ascii") {
        fail("only ascii PLY is supported, found '" + fmt + "'");
      }
    } else if (key == "element") {
      std::string name;
      long long n = -1;
      words >> name >> n;
      in_vertex = name == "vertex";
      if (in_vertex) {
        if (n < 0) {
          fail("bad vertex count");
        }
        vertex_count = static_cast<std::size_t>(n);
        seen_vertex = true;
      }
    } else if (key == "property" && in_vertex) {
      std::string type, name;
      words >> type;
      if (type == "list") {
        fail("list properties on vertices are not supported");
      }
      words >> name;
      vertex_props.push_back(name);
    }
  }
  if (!seen_vertex) {
    return PointCloud{};
  }
  auto find_prop = [&](const std::string & name) {
    auto it = std::find(vertex_props.begin(), vertex_props.end(), name);
    if (it == vertex_props.end()) {
      fail("vertex element lacks property '" + name + "'");
    }
    return static_cast<std::size_t>(it - vertex_props.begin());
  };
  const std::size_t ix = find_prop("x");
  const std::size_t iy = find_prop("y");
  const std::size_t iz = find_prop("z");

  std::vector<Point3> points;
  points.reserve(vertex_count);
  std::vector<double> values(vertex_props.size());
  for (std::size_t v = 0; v < vertex_count; ++v) {
    if (!next_line()) {
      fail("expected " + std::to_string(vertex_count) + " vertices, file ended");
    }
    std::istringstream words(line);
    for (auto & value : values) {
      if (!(words >> value)) {
        fail("malformed vertex record");
      }
    }
    const Point3 p{values[ix], values[iy], values[iz]};
    if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z)) {
      fail("non-finite coordinate");
    }
    points.push_back(p);
  }
  return PointCloud(std::move(points));
}

std::string line_ref(const std::string & origin, int line_no)
{
  return origin + ":" + std::to_string(line_no);
}

}  // namespace

ScanFormat scan_format_from_path(const fs::path & path)
{
  const auto ext = path.extension().string();
  if (ext == ".bin") {
    return ScanFormat::kKittiBin;
  }
  if (ext == ".ply") {
    return ScanFormat::kPlyAscii;
  }
  throw Error("cannot infer scan format of '" + path.string() + "' (expected .bin or .ply)");
}

PointCloud decode_kitti_records(std::span<const std::uint8_t> bytes, const std::string & origin)
{
  if (bytes.size() % kKittiRecordBytes != 0) {
    throw Error(
      origin + ": size " + std::to_string(bytes.size()) + " is not a multiple of " +
      std::to_string(kKittiRecordBytes) + "-byte records");
  }
  const std::size_t n = bytes.size() / kKittiRecordBytes;
  std::vector<Point3> points;
  points.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint8_t * rec = bytes.data() + i * kKittiRecordBytes;
    const float x = load_f32_le(rec);
    const float y = load_f32_le(rec + 4);
    const float z = load_f32_le(rec + 8);
    if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(z)) {
      throw Error(origin + ": record " + std::to_string(i) + " has a non-finite coordinate");
    }
    points.push_back({x, y, z});
  }
  return PointCloud(std::move(points));
}

std::vector<std::uint8_t> encode_kitti_records(const PointCloud & cloud)
{
  std::vector<std::uint8_t> bytes(cloud.size() * kKittiRecordBytes);
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    std::uint8_t * rec = bytes.data() + i * kKittiRecordBytes;
    store_f32_le(static_cast<float>(cloud[i].x), rec);
    store_f32_le(static_cast<float>(cloud[i].y), rec + 4);
    store_f32_le(static_cast<float>(cloud[i].z), rec + 8);
    store_f32_le(0.0f, rec + 12);
  }
  return bytes;
}

PointCloud load_scan(const fs::path & path, ScanFormat format)
{
  switch (format) {
    case ScanFormat::kKittiBin:
      return decode_kitti_records(read_bytes(path), path.string());
    case ScanFormat::kPlyAscii:
      return load_ply_ascii(path);
  }
  throw Error("unknown scan format");
}

PointCloud load_scan(const fs::path & path)
{
  return load_scan(path, scan_format_from_path(path));
}

void save_scan_kitti(const PointCloud & cloud, const fs::path & path)
{
  const auto bytes = encode_kitti_records(cloud);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error("cannot open '" + path.string() + "' for writing");
  }
  out.write(reinterpret_cast<const char *>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) {
    throw Error("write failure on '" + path.string() + "'");
  }
}

TrajectorySet parse_trajectories(const std::string & text, TrajectoryRole role, const std::string & origin)
{
  TrajectorySet set;
  set.role = role;
  std::unordered_map<std::string, int> first_line;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) {
      continue;
    }
    const std::string where = line_ref(origin, line_no);
    json doc;
    try {
      doc = json::parse(line);
    } catch (const json::parse_error & e) {
      throw Error(where + ": malformed JSON (" + e.what() + ")");
    }
    if (!doc.is_object() || !doc.contains("id") || !doc.contains("frames")) {
      throw Error(where + ": expected an object with \"id\" and \"frames\"");
    }
    const auto & id_node = doc.at("id");
    if (!id_node.is_string()) {
      throw Error(where + ": \"id\" must be a string");
    }
    Trajectory traj;
    traj.object_id = id_node.get<std::string>();
    if (auto [it, inserted] = first_line.emplace(traj.object_id, line_no); !inserted) {
      throw Error(
        where + ": duplicate object id \"" + traj.object_id + "\" (first defined at line " +
        std::to_string(it->second) + ", repeated at line " + std::to_string(line_no) + ")");
    }
    const auto & frames = doc.at("frames");
    if (!frames.is_object()) {
      throw Error(where + ": \"frames\" must be an object");
    }
    for (auto it = frames.begin(); it != frames.end(); ++it) {
      int t = 0;
      std::size_t used = 0;
      try {
        t = std::stoi(it.key(), &used);
      } catch (const std::exception &) {
        used = 0;
      }
      if (used == 0 || used != it.key().size()) {
        throw Error(where + ": frame key \"" + it.key() + "\" is not an integer");
      }
      const auto & pos = it.value();
      if (!pos.is_array() || pos.size() < 2 || pos.size() > 3 || !pos[0].is_number() ||
          !pos[1].is_number()) {
        throw Error(where + ": frame " + it.key() + " must be [x, y] or [x, y, z]");
      }
      const Vec2 xy{pos[0].get<double>(), pos[1].get<double>()};
      if (!std::isfinite(xy.x) || !std::isfinite(xy.y)) {
        throw Error(where + ": frame " + it.key() + " has a non-finite position");
      }
      traj.positions.emplace(t, xy);
    }
    if (traj.positions.empty()) {
      throw Error(where + ": trajectory \"" + traj.object_id + "\" has no valid frames");
    }
    set.horizon = std::max(set.horizon, traj.positions.rbegin()->first);
    set.trajectories.push_back(std::move(traj));
  }
  return set;
}

TrajectorySet load_trajectories(const fs::path & path, TrajectoryRole role)
{
  return parse_trajectories(read_text(path), role, path.string());
}

bool operator==(const ManifestFrame & a, const ManifestFrame & b)
{
  if (a.t != b.t || a.scan != b.scan || a.corr != b.corr || a.ego.has_value() != b.ego.has_value()) {
    return false;
  }
  return !a.ego || a.ego->to_row_major() == b.ego->to_row_major();
}

const std::vector<ManifestFrame> & DatasetManifest::sequence(const std::string & id) const
{
  auto it = sequences.find(id);
  if (it == sequences.end()) {
    throw Error("manifest has no sequence \"" + id + "\"");
  }
  return it->second;
}

DatasetManifest load_manifest(const fs::path & path)
{
  json doc;
  try {
    doc = json::parse(read_text(path));
  } catch (const json::parse_error & e) {
    throw Error(path.string() + ": malformed JSON (" + e.what() + ")");
  }
  const std::string origin = path.string();
  const fs::path base = fs::absolute(path).parent_path();
  auto resolve = [&](const std::string & raw) { return (base / raw).lexically_normal(); };

  DatasetManifest manifest;
  try {
    manifest.frame_period = doc.at("frame_period").get<double>();
    if (!(manifest.frame_period > 0.0) || !std::isfinite(manifest.frame_period)) {
      throw Error(origin + ": frame_period must be a positive number");
    }
    for (const auto & [seq_id, entries] : doc.at("sequences").items()) {
      std::vector<ManifestFrame> frames;
      for (const auto & entry : entries) {
        ManifestFrame frame;
        frame.t = entry.at("t").get<int>();
        frame.scan = resolve(entry.at("scan").get<std::string>());
        if (!fs::exists(frame.scan)) {
          throw Error(origin + ": sequence \"" + seq_id + "\" frame " + std::to_string(frame.t) +
                      " references missing scan '" + frame.scan.string() + "'");
        }
        if (entry.contains("ego") && !entry.at("ego").is_null()) {
          std::vector<double> flat;
          for (const auto & v : entry.at("ego")) {
            if (v.is_array()) {
              for (const auto & w : v) {
                flat.push_back(w.get<double>());
              }
            } else {
              flat.push_back(v.get<double>());
            }
          }
          try {
            frame.ego = RigidTransform::from_row_major(flat);
          } catch (const Error & e) {
            throw Error(origin + ": sequence \"" + seq_id + "\" frame " + std::to_string(frame.t) +
                        ": " + e.what());
          }
        }
        if (entry.contains("corr") && !entry.at("corr").is_null()) {
          frame.corr = resolve(entry.at("corr").get<std::string>());
          if (!fs::exists(*frame.corr)) {
            throw Error(origin + ": sequence \"" + seq_id + "\" frame " + std::to_string(frame.t) +
                        " references missing correspondence file '" + frame.corr->string() + "'");
          }
        }
        frames.push_back(std::move(frame));
      }
      std::sort(frames.begin(), frames.end(), [](const auto & a, const auto & b) { return a.t < b.t; });
      for (std::size_t i = 1; i < frames.size(); ++i) {
        if (frames[i].t != frames[i - 1].t + 1) {
          throw Error(origin + ": sequence \"" + seq_id + "\" frame indices are not contiguous at t=" +
                      std::to_string(frames[i].t));
        }
      }
      manifest.sequences.emplace(seq_id, std::move(frames));
    }
  } catch (const json::exception & e) {
    throw Error(origin + ": invalid manifest (" + e.what() + ")");
  }
  return manifest;
}

void save_manifest(const DatasetManifest & manifest, const fs::path & path)
{
  const fs::path base = fs::absolute(path).parent_path();
  auto rel = [&](const fs::path & p) { return fs::absolute(p).lexically_relative(base).generic_string(); };

  json doc;
  doc["frame_period"] = manifest.frame_period;
  json sequences = json::object();
  for (const auto & [seq_id, frames] : manifest.sequences) {
    json entries = json::array();
    for (const auto & frame : frames) {
      json entry;
      entry["t"] = frame.t;
      entry["scan"] = rel(frame.scan);
      if (frame.ego) {
        entry["ego"] = frame.ego->to_row_major();
      }
      if (frame.corr) {
        entry["corr"] = rel(*frame.corr);
      }
      entries.push_back(std::move(entry));
    }
    sequences[seq_id] = std::move(entries);
  }
  doc["sequences"] = std::move(sequences);

  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    throw Error("cannot open '" + path.string() + "' for writing");
  }
  out << doc.dump(2) << '\n';
}

PointCloudSequence load_sequence(const DatasetManifest & manifest, const std::string & id)
{
  PointCloudSequence seq;
  seq.frame_period = manifest.frame_period;
  for (const auto & frame : manifest.sequence(id)) {
    seq.frames.push_back(load_scan(frame.scan));
  }
  return seq;
}

std::vector<std::pair<std::size_t, std::size_t>> load_correspondences(const fs::path & path)
{
  std::istringstream in(read_text(path));
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos || line[start] == '#') {
      continue;
    }
    std::istringstream words(line);
    long long i = -1, j = -1;
    std::string extra;
    if (!(words >> i >> j) || i < 0 || j < 0 || (words >> extra)) {
      throw Error(line_ref(path.string(), line_no) + ": expected two non-negative indices");
    }
    pairs.emplace_back(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  }
  return pairs;
}

}  // namespace spf
