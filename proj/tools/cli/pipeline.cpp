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

#include "pipeline.hpp"

#include "spf/core/error.hpp"

#include <cmath>
#include <fstream>
#include <map>

namespace spf::cli
{

namespace fs = std::filesystem;
using nlohmann::json;

int frames_for_duration(double seconds, double frame_period)
{
  if (!(seconds > 0.0) || !(frame_period > 0.0)) {
    throw Error("durations and frame period must be positive");
  }
  const auto frames = static_cast<int>(std::lround(seconds / frame_period));
  if (frames < 1) {
    throw Error("duration shorter than one frame");
  }
  return frames;
}

std::vector<Window> enumerate_windows(const DatasetManifest & manifest, const std::vector<std::string> & sequences,
                                      int past_frames, int future_frames, int stride)
{
  if (past_frames < 1 || future_frames < 1 || stride < 1) {
    throw Error("past frames, future frames and stride must all be at least 1");
  }
  std::vector<Window> windows;
  for (const auto & seq : sequences) {
    const auto & frames = manifest.sequence(seq);
    if (frames.empty()) {
      continue;
    }
    const int first = frames.front().t;
    const int last = frames.back().t;
    const std::size_t before = windows.size();
    for (int anchor = first + past_frames - 1; anchor + future_frames <= last; anchor += stride) {
      windows.push_back({seq, anchor, past_frames, future_frames});
    }
    // Too short to score, but long enough to forecast from its last frame.
    if (windows.size() == before && last - first + 1 >= past_frames) {
      windows.push_back({seq, last, past_frames, future_frames});
    }
  }
  return windows;
}

bool has_ground_truth(const DatasetManifest & manifest, const Window & window)
{
  const auto & frames = manifest.sequence(window.sequence);
  return !frames.empty() && window.anchor_t + window.future_frames <= frames.back().t;
}

const ManifestFrame & frame_at(const DatasetManifest & manifest, const std::string & sequence, int t)
{
  const auto & frames = manifest.sequence(sequence);
  if (frames.empty() || t < frames.front().t || t > frames.back().t) {
    throw Error("sequence \"" + sequence + "\" has no frame t=" + std::to_string(t));
  }
  return frames[static_cast<std::size_t>(t - frames.front().t)];
}

forecast::ForecastRequest make_request(const DatasetManifest & manifest, const Window & window,
                                       forecast::Method method, const forecast::IcpParams & icp)
{
  forecast::ForecastRequest req;
  req.horizon = window.future_frames;
  req.past.frame_period = manifest.frame_period;
  req.icp = icp;
  bool all_poses = true;
  std::vector<RigidTransform> poses;
  for (int t = window.anchor_t - window.past_frames + 1; t <= window.anchor_t; ++t) {
    const auto & frame = frame_at(manifest, window.sequence, t);
    req.past.frames.push_back(load_scan(frame.scan));
    if (frame.ego) {
      poses.push_back(*frame.ego);
    } else {
      all_poses = false;
    }
  }
  if (method == forecast::Method::kGtEgo && !all_poses) {
    throw Error("window " + window.id() + ": gt-ego needs ego poses for every past frame");
  }
  if (all_poses) {
    req.ego_poses = std::move(poses);
  }
  return req;
}

FrameScore score_frame(const PointCloud & pred, const PointCloud & gt, int t, int k, const ScoreOptions & opts)
{
  FrameScore s;
  s.t = t;
  s.k = k;
  s.chamfer = metrics::chamfer(pred, gt, metrics::Normalization::kSum);
  s.chamfer_normalized = metrics::chamfer(pred, gt, metrics::Normalization::kPerPoint);
  if (opts.with_emd) {
    const auto e = metrics::emd_detailed(pred, gt, opts.metric);
    s.emd = e.total;
    s.emd_normalized = e.mean;
  }
  return s;
}

MetricMeans window_mean(const WindowScore & window)
{
  MetricMeans m;
  if (window.frames.empty()) {
    throw Error("window " + window.window + " has no scored frames");
  }
  double emd = 0.0;
  double emd_norm = 0.0;
  bool have_emd = true;
  for (const auto & f : window.frames) {
    m.chamfer += f.chamfer;
    m.chamfer_normalized += f.chamfer_normalized;
    if (f.emd && f.emd_normalized) {
      emd += *f.emd;
      emd_norm += *f.emd_normalized;
    } else {
      have_emd = false;
    }
  }
  const auto n = static_cast<double>(window.frames.size());
  m.chamfer /= n;
  m.chamfer_normalized /= n;
  if (have_emd) {
    m.emd = emd / n;
    m.emd_normalized = emd_norm / n;
  }
  m.ppfe = window.ppfe;
  return m;
}

MetricMeans mean_over_windows(const std::vector<WindowScore> & windows)
{
  if (windows.empty()) {
    throw Error("no windows to aggregate");
  }
  MetricMeans total;
  double emd = 0.0;
  double emd_norm = 0.0;
  bool have_emd = true;
  double ppfe = 0.0;
  std::size_t ppfe_count = 0;
  for (const auto & w : windows) {
    const auto m = window_mean(w);
    total.chamfer += m.chamfer;
    total.chamfer_normalized += m.chamfer_normalized;
    if (m.emd) {
      emd += *m.emd;
      emd_norm += *m.emd_normalized;
    } else {
      have_emd = false;
    }
    if (m.ppfe) {
      ppfe += *m.ppfe;
      ++ppfe_count;
    }
  }
  const auto n = static_cast<double>(windows.size());
  total.chamfer /= n;
  total.chamfer_normalized /= n;
  if (have_emd) {
    total.emd = emd / n;
    total.emd_normalized = emd_norm / n;
  }
  if (ppfe_count > 0) {
    total.ppfe = ppfe / static_cast<double>(ppfe_count);
  }
  return total;
}

namespace
{

json means_json(const MetricMeans & m)
{
  json j;
  j["chamfer"] = m.chamfer;
  j["chamfer_normalized"] = m.chamfer_normalized;
  if (m.emd) {
    j["emd"] = *m.emd;
    j["emd_normalized"] = *m.emd_normalized;
  }
  if (m.ppfe) {
    j["ppfe"] = *m.ppfe;
  }
  return j;
}

}  // namespace

json method_report(const std::vector<WindowScore> & windows, const ScoreOptions & opts)
{
  const auto mean = mean_over_windows(windows);
  json metrics_list = json::array();
  metrics_list.push_back(metrics::to_json({"chamfer", mean.chamfer, false, {}, {}}));
  metrics_list.push_back(metrics::to_json({"chamfer", mean.chamfer_normalized, true, {}, {}}));
  if (mean.emd) {
    const auto n = opts.metric.emd_sample_count;
    const auto seed = opts.metric.sampling_seed;
    metrics_list.push_back(metrics::to_json({"emd", *mean.emd, false, n, seed}));
    metrics_list.push_back(metrics::to_json({"emd", *mean.emd_normalized, true, n, seed}));
  }
  if (mean.ppfe) {
    metrics_list.push_back(metrics::to_json({"ppfe", *mean.ppfe, false, {}, {}}));
  }

  // Per-horizon means over windows, for horizon-wise comparisons.
  std::map<int, std::vector<const FrameScore *>> by_k;
  for (const auto & w : windows) {
    for (const auto & f : w.frames) {
      by_k[f.k].push_back(&f);
    }
  }
  json per_horizon = json::array();
  for (const auto & [k, frames] : by_k) {
    WindowScore pseudo;
    pseudo.window = "k" + std::to_string(k);
    for (const auto * f : frames) {
      pseudo.frames.push_back(*f);
    }
    json entry = means_json(window_mean(pseudo));
    entry["k"] = k;
    entry["count"] = frames.size();
    per_horizon.push_back(std::move(entry));
  }

  json per_window = json::array();
  for (const auto & w : windows) {
    json entry;
    entry["window"] = w.window;
    entry["sequence"] = w.sequence;
    entry["anchor_t"] = w.anchor_t;
    json frames = json::array();
    for (const auto & f : w.frames) {
      json fj;
      fj["t"] = f.t;
      fj["k"] = f.k;
      fj["chamfer"] = f.chamfer;
      fj["chamfer_normalized"] = f.chamfer_normalized;
      if (f.emd) {
        fj["emd"] = *f.emd;
        fj["emd_normalized"] = *f.emd_normalized;
      }
      frames.push_back(std::move(fj));
    }
    entry["frames"] = std::move(frames);
    entry["mean"] = means_json(window_mean(w));
    per_window.push_back(std::move(entry));
  }

  json out;
  out["windows"] = windows.size();
  out["metrics"] = std::move(metrics_list);
  out["mean"] = means_json(mean);
  out["per_horizon"] = std::move(per_horizon);
  out["per_window"] = std::move(per_window);
  return out;
}

void write_text_file(const fs::path & path, const std::string & text)
{
  if (path.has_parent_path()) {
    fs::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error("cannot open '" + path.string() + "' for writing");
  }
  out << text;
  if (!out) {
    throw Error("write failure on '" + path.string() + "'");
  }
}

}  // namespace spf::cli
