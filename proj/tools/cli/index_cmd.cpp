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

#include "commands.hpp"

#include "spf/core/error.hpp"
#include "spf/core/io.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <sstream>

namespace spf::cli
{

namespace fs = std::filesystem;

namespace
{

// KITTI odometry poses: one 3x4 row-major matrix per line.
std::vector<RigidTransform> load_pose_file(const fs::path & path)
{
  std::ifstream in(path);
  if (!in) {
    throw Error("cannot open '" + path.string() + "'");
  }
  std::vector<RigidTransform> poses;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) {
      continue;
    }
    std::istringstream words(line);
    std::vector<double> v(16, 0.0);
    for (int i = 0; i < 12; ++i) {
      if (!(words >> v[static_cast<std::size_t>(i)])) {
        throw Error(path.string() + ":" + std::to_string(line_no) + ": expected 12 pose values");
      }
    }
    v[15] = 1.0;
    try {
      poses.push_back(RigidTransform::from_row_major(v));
    } catch (const Error & e) {
      throw Error(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return poses;
}

}  // namespace

int cmd_index(const IndexOptions & opts, const GlobalOptions &, std::ostream & log)
{
  if (!fs::is_directory(opts.root)) {
    throw Error("dataset root '" + opts.root.string() + "' is not a directory");
  }
  if (!(opts.frame_period > 0.0)) {
    throw Error("frame period must be positive");
  }
  DatasetManifest manifest;
  manifest.frame_period = opts.frame_period;

  std::vector<fs::path> seq_dirs;
  for (const auto & entry : fs::directory_iterator(opts.root)) {
    if (entry.is_directory()) {
      seq_dirs.push_back(entry.path());
    }
  }
  std::sort(seq_dirs.begin(), seq_dirs.end());

  for (const auto & dir : seq_dirs) {
    std::vector<std::pair<int, fs::path>> scans;
    for (const auto & entry : fs::directory_iterator(dir)) {
      const auto ext = entry.path().extension();
      if (!entry.is_regular_file() || (ext != ".bin" && ext != ".ply")) {
        continue;
      }
      const std::string stem = entry.path().stem().string();
      std::size_t used = 0;
      int t = 0;
      try {
        t = std::stoi(stem, &used);
      } catch (const std::exception &) {
        used = 0;
      }
      if (used == 0 || used != stem.size()) {
        log << "skipping '" << entry.path().string() << "': name is not a frame index\n";
        continue;
      }
      scans.emplace_back(t, entry.path());
    }
    if (scans.empty()) {
      continue;
    }
    std::sort(scans.begin(), scans.end());
    std::vector<RigidTransform> poses;
    if (fs::exists(dir / "poses.txt")) {
      poses = load_pose_file(dir / "poses.txt");
      if (poses.size() < scans.size()) {
        throw Error((dir / "poses.txt").string() + ": " + std::to_string(poses.size()) + " poses for " +
                    std::to_string(scans.size()) + " scans");
      }
    }
    std::vector<ManifestFrame> frames;
    for (std::size_t i = 0; i < scans.size(); ++i) {
      ManifestFrame f;
      f.t = scans[i].first;
      f.scan = fs::absolute(scans[i].second).lexically_normal();
      if (!poses.empty()) {
        f.ego = poses[i];
      }
      if (i > 0 && f.t != frames.back().t + 1) {
        throw Error(dir.string() + ": frame indices are not contiguous at " + std::to_string(f.t));
      }
      frames.push_back(std::move(f));
    }
    manifest.sequences.emplace(dir.filename().string(), std::move(frames));
  }
  if (manifest.sequences.empty()) {
    throw Error("no sequences with scans found under '" + opts.root.string() + "'");
  }
  save_manifest(manifest, opts.output);
  log << "indexed " << manifest.sequences.size() << " sequences into " << opts.output.string() << '\n';
  return 0;
}

}  // namespace spf::cli
