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
#include "pipeline.hpp"

#include "spf/core/error.hpp"
#include "spf/core/parallel.hpp"

#include <algorithm>
#include <ostream>

namespace spf::cli
{

namespace fs = std::filesystem;
using nlohmann::json;

namespace
{

int resolve_frames(int frames, double seconds, double period, const char * what)
{
  if (frames > 0) {
    return frames;
  }
  if (seconds > 0.0) {
    return frames_for_duration(seconds, period);
  }
  throw Error(std::string("set either the ") + what + " frame count or its duration in seconds");
}

}  // namespace

int cmd_forecast(const ForecastOptions & opts, const GlobalOptions & global, std::ostream & log)
{
  const auto manifest = load_manifest(opts.manifest);
  const auto method = forecast::method_from_string(opts.method);
  const int m = resolve_frames(opts.past_frames, opts.past_seconds, manifest.frame_period, "past");
  const int n = resolve_frames(opts.future_frames, opts.future_seconds, manifest.frame_period, "future");
  if (m < forecast::min_past_frames(method)) {
    throw Error(std::string(forecast::to_string(method)) + " needs at least " +
                std::to_string(forecast::min_past_frames(method)) + " past frames (M=" + std::to_string(m) + ")");
  }

  std::vector<std::string> sequences = opts.sequences;
  if (sequences.empty()) {
    for (const auto & [id, frames] : manifest.sequences) {
      sequences.push_back(id);
    }
  }
  auto windows = enumerate_windows(manifest, sequences, m, n, opts.stride);
  if (opts.has_anchor) {
    std::erase_if(windows, [&](const Window & w) { return w.anchor_t != opts.anchor; });
  }
  if (windows.empty()) {
    throw Error("no window has " + std::to_string(m) + " past and " + std::to_string(n) +
                " future frames in the selected sequences");
  }

  parallel_for(windows.size(), global.jobs, [&](std::size_t i) {
    const auto & w = windows[i];
    const auto req = make_request(manifest, w, method, opts.icp);
    const auto result = forecast::run_forecast(method, req);
    const fs::path dir = opts.output / w.id() / forecast::to_string(method);
    fs::create_directories(dir);
    json frames = json::array();
    for (int k = 1; k <= n; ++k) {
      const int t = w.anchor_t + k;
      save_scan_kitti(result.frames[static_cast<std::size_t>(k - 1)], dir / (std::to_string(t) + ".bin"));
      frames.push_back(t);
    }
    json sidecar;
    sidecar["sequence"] = w.sequence;
    sidecar["method"] = forecast::to_string(method);
    sidecar["anchor_t"] = w.anchor_t;
    sidecar["past_frames"] = m;
    sidecar["future_frames"] = n;
    sidecar["frame_period"] = manifest.frame_period;
    sidecar["frames"] = std::move(frames);
    sidecar["diagnostics"] = result.diagnostics;
    write_text_file(dir / "forecast.json", sidecar.dump(2) + "\n");
  });
  log << "wrote " << windows.size() << " " << forecast::to_string(method) << " forecasts (M=" << m << ", N=" << n
      << ") to " << opts.output.string() << '\n';
  return 0;
}

}  // namespace spf::cli
