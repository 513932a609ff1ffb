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
#include "spf/rangemap/rangemap.hpp"

#include <filesystem>
#include <iomanip>
#include <ostream>

namespace spf::cli
{

int cmd_rangemap(const RangemapOptions & opts, const GlobalOptions &, std::ostream & log)
{
  if (opts.output.has_parent_path()) {
    std::filesystem::create_directories(opts.output.parent_path());
  }
  if (opts.direction == "encode") {
    const auto grid = rangemap::SphericalGrid::from_degrees(
      opts.grid.rows, opts.grid.cols, opts.grid.phi_min_deg, opts.grid.phi_max_deg, opts.grid.theta_min_deg,
      opts.grid.theta_max_deg);
    const auto cloud = load_scan(opts.input);
    rangemap::EncodeStats stats;
    const auto map = rangemap::encode(cloud, grid, &stats);
    rangemap::write_rangemap(map, opts.output);
    const double occupancy =
      static_cast<double>(map.occupied_count()) / static_cast<double>(map.ranges().size());
    log << "encoded " << stats.input_points << " points into " << grid.rows << "x" << grid.cols
        << " map: occupancy=" << std::setprecision(6) << occupancy << " occupied=" << map.occupied_count()
        << " dropped=" << stats.dropped_points << " collided=" << stats.collided_points << '\n';
    return 0;
  }
  if (opts.direction == "decode") {
    const auto map = rangemap::read_rangemap(opts.input);
    const auto cloud = rangemap::decode(map, rangemap::Precision::kFloat32);
    save_scan_kitti(cloud, opts.output);
    if (cloud.empty()) {
      log << "warning: range map has no occupied pixels; wrote an empty cloud\n";
    }
    log << "decoded " << cloud.size() << " points from " << map.grid().rows << "x" << map.grid().cols
        << " map\n";
    return 0;
  }
  throw Error("rangemap direction must be 'encode' or 'decode', got '" + opts.direction + "'");
}

}  // namespace spf::cli
