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

#ifndef SPF__CORE__IO_HPP_
#define SPF__CORE__IO_HPP_

#include "spf/core/types.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace spf
{

enum class ScanFormat { kKittiBin, kPlyAscii };

/// Picks the format from the file extension (".bin" or ".ply").
ScanFormat scan_format_from_path(const std::filesystem::path & path);

/// KITTI records are four little-endian float32 (x, y, z, intensity); the
/// intensity is discarded. Point order follows the file.
PointCloud load_scan(const std::filesystem::path & path, ScanFormat format);
PointCloud load_scan(const std::filesystem::path & path);

/// Writes float32 records with zero intensity.
void save_scan_kitti(const PointCloud & cloud, const std::filesystem::path & path);

std::vector<std::uint8_t> encode_kitti_records(const PointCloud & cloud);
PointCloud decode_kitti_records(std::span<const std::uint8_t> bytes, const std::string & origin);

/// One trajectory per JSON line: {"id": str, "frames": {"<t>": [x, y(, z)]}}.
/// A third coordinate is dropped. Blank lines are skipped.
TrajectorySet load_trajectories(
  const std::filesystem::path & path, TrajectoryRole role = TrajectoryRole::kGroundTruth);
TrajectorySet parse_trajectories(
  const std::string & text, TrajectoryRole role, const std::string & origin);

struct ManifestFrame
{
  int t{0};
  std::filesystem::path scan;
  std::optional<RigidTransform> ego;
  std::optional<std::filesystem::path> corr;

  friend bool operator==(const ManifestFrame &, const ManifestFrame &);
};

/// Paths are stored resolved against the manifest's directory.
struct DatasetManifest
{
  double frame_period{0.1};
  std::map<std::string, std::vector<ManifestFrame>> sequences;

  const std::vector<ManifestFrame> & sequence(const std::string & id) const;
};

DatasetManifest load_manifest(const std::filesystem::path & path);
/// Paths are written relative to the directory of `path`.
void save_manifest(const DatasetManifest & manifest, const std::filesystem::path & path);

PointCloudSequence load_sequence(const DatasetManifest & manifest, const std::string & id);

/// Index pairs (i, j) read from a text file of "i j" lines.
std::vector<std::pair<std::size_t, std::size_t>> load_correspondences(
  const std::filesystem::path & path);

}  // namespace spf

#endif  // SPF__CORE__IO_HPP_
