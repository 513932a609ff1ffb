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

#ifndef SPF__TOOLS__PIPELINE_HPP_
#define SPF__TOOLS__PIPELINE_HPP_

#include "spf/core/io.hpp"
#include "spf/forecast/forecasters.hpp"
#include "spf/metrics/metrics.hpp"

#include "json.hpp"

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace spf::cli
{

/// Frames covering `seconds` at `frame_period`, rounded to the nearest integer.
int frames_for_duration(double seconds, double frame_period);

/// M past frames ending at anchor_t and the N frames after it.
struct Window
{
  std::string sequence;
  int anchor_t{0};
  int past_frames{1};
  int future_frames{1};

  std::string id() const { return sequence + "_w" + std::to_string(anchor_t); }
};

/// Every window whose past and future frames exist, anchors advancing by
/// `stride`, in (sequence, anchor) order. A sequence with at least M frames
/// but no complete window contributes one window anchored at its last frame.
std::vector<Window> enumerate_windows(const DatasetManifest & manifest, const std::vector<std::string> & sequences,
                                      int past_frames, int future_frames, int stride);

/// True when every future frame of the window exists in the manifest.
bool has_ground_truth(const DatasetManifest & manifest, const Window & window);

const ManifestFrame & frame_at(const DatasetManifest & manifest, const std::string & sequence, int t);

forecast::ForecastRequest make_request(const DatasetManifest & manifest, const Window & window,
                                       forecast::Method method, const forecast::IcpParams & icp);

struct FrameScore
{
  int t{0};
  int k{0};  // 1-based horizon step
  double chamfer{0.0};
  double chamfer_normalized{0.0};
  std::optional<double> emd;
  std::optional<double> emd_normalized;
};

struct WindowScore
{
  std::string window;
  std::string sequence;
  int anchor_t{0};
  std::vector<FrameScore> frames;
  std::optional<double> ppfe;
};

struct ScoreOptions
{
  metrics::MetricConfig metric;
  bool with_emd{true};
};

FrameScore score_frame(const PointCloud & pred, const PointCloud & gt, int t, int k, const ScoreOptions & opts);

/// Mean of the per-frame values (first within each window, then over windows).
struct MetricMeans
{
  double chamfer{0.0};
  double chamfer_normalized{0.0};
  std::optional<double> emd;
  std::optional<double> emd_normalized;
  std::optional<double> ppfe;
};

MetricMeans window_mean(const WindowScore & window);
MetricMeans mean_over_windows(const std::vector<WindowScore> & windows);

/// Report fragment for one method.
nlohmann::json method_report(const std::vector<WindowScore> & windows, const ScoreOptions & opts);

/// Scores every <window>/<method>/ directory under `root` against the
/// manifest's frames, grouped by method name.
std::map<std::string, std::vector<WindowScore>> evaluate_forecast_tree(
  const DatasetManifest & manifest, const std::filesystem::path & root, const ScoreOptions & opts,
  std::size_t jobs);

/// Writes `text` to `path` (creating parent directories).
void write_text_file(const std::filesystem::path & path, const std::string & text);

}  // namespace spf::cli

#endif  // SPF__TOOLS__PIPELINE_HPP_
