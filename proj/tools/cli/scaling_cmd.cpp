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
#include "spf/core/random.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

namespace spf::cli
{

namespace fs = std::filesystem;

std::vector<std::string> subset_sequences(const std::vector<std::string> & ids, double fraction, std::uint64_t seed)
{
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw Error("fractions must lie in (0, 1], got " + std::to_string(fraction));
  }
  std::vector<std::string> sorted = ids;
  std::sort(sorted.begin(), sorted.end());
  const auto count = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(sorted.size()) - 1e-9));
  if (count == 0) {
    throw Error("fraction " + std::to_string(fraction) + " selects no sequences");
  }
  Rng rng(seed);
  const auto perm = rng.permutation(sorted.size());
  std::vector<std::string> out;
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back(sorted[perm[i]]);
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace
{

int resolve(int frames, double seconds, double period, const char * what)
{
  if (frames > 0) {
    return frames;
  }
  if (seconds > 0.0) {
    return frames_for_duration(seconds, period);
  }
  throw Error(std::string("set either the ") + what + " frame count or its duration in seconds");
}

std::string format_number(double v)
{
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<WindowScore> score_baseline(const DatasetManifest & manifest, forecast::Method method, int m, int n,
                                        int stride, const ScoreOptions & opts, std::size_t jobs)
{
  std::vector<std::string> ids;
  for (const auto & [id, frames] : manifest.sequences) {
    ids.push_back(id);
  }
  auto windows = enumerate_windows(manifest, ids, m, n, stride);
  std::erase_if(windows, [&](const Window & w) { return !has_ground_truth(manifest, w); });
  if (windows.empty()) {
    throw Error("evaluation manifest has no complete window");
  }
  std::vector<WindowScore> scores(windows.size());
  parallel_for(windows.size(), jobs, [&](std::size_t i) {
    const auto & w = windows[i];
    const auto result = forecast::run_forecast(method, make_request(manifest, w, method, {}));
    WindowScore ws;
    ws.window = w.id();
    ws.sequence = w.sequence;
    ws.anchor_t = w.anchor_t;
    for (int k = 1; k <= n; ++k) {
      const int t = w.anchor_t + k;
      const auto gt = load_scan(frame_at(manifest, w.sequence, t).scan);
      ws.frames.push_back(score_frame(result.frames[static_cast<std::size_t>(k - 1)], gt, t, k, opts));
    }
    scores[i] = std::move(ws);
  });
  return scores;
}

}  // namespace

int cmd_scaling(const ScalingOptions & opts, const GlobalOptions & global, std::ostream & log)
{
  if (opts.fractions.empty()) {
    throw Error("at least one fraction is required");
  }
  const auto train = load_manifest(opts.manifest);
  const auto eval_manifest = opts.eval_manifest.empty() ? train : load_manifest(opts.eval_manifest);
  const int m = resolve(opts.past_frames, opts.past_seconds, train.frame_period, "past");
  const int n = resolve(opts.future_frames, opts.future_seconds, train.frame_period, "future");
  std::vector<std::string> ids;
  for (const auto & [id, frames] : train.sequences) {
    ids.push_back(id);
  }

  ScoreOptions score_opts;
  score_opts.metric.emd_sample_count = opts.emd_samples;
  score_opts.metric.sampling_seed = global.seed;
  score_opts.metric.validate();
  score_opts.with_emd = !opts.no_emd;

  // Non-learned baselines do not depend on the training subset.
  std::optional<MetricMeans> baseline;
  if (opts.forecast_root.empty()) {
    const auto method = forecast::method_from_string(opts.method);
    baseline = mean_over_windows(score_baseline(eval_manifest, method, m, n, opts.stride, score_opts, global.jobs));
  }

  fs::create_directories(opts.output);
  std::ostringstream csv;
  csv << "fraction,n_sequences,n_samples,cd,emd\n";
  for (std::size_t i = 0; i < opts.fractions.size(); ++i) {
    const double fraction = opts.fractions[i];
    const auto subset_ids = subset_sequences(ids, fraction, global.seed);
    DatasetManifest subset;
    subset.frame_period = train.frame_period;
    for (const auto & id : subset_ids) {
      subset.sequences.emplace(id, train.sequence(id));
    }
    const std::string label = "subset_" + std::to_string(i);
    save_manifest(subset, opts.output / (label + ".json"));
    auto windows = enumerate_windows(subset, subset_ids, m, n, opts.stride);
    const auto samples = static_cast<std::size_t>(std::count_if(
      windows.begin(), windows.end(), [&](const Window & w) { return has_ground_truth(subset, w); }));

    MetricMeans means;
    if (baseline) {
      means = *baseline;
    } else {
      const auto by_method =
        evaluate_forecast_tree(eval_manifest, opts.forecast_root / label, score_opts, global.jobs);
      std::vector<WindowScore> all;
      for (const auto & [method, windows] : by_method) {
        all.insert(all.end(), windows.begin(), windows.end());
      }
      means = mean_over_windows(all);
    }
    csv << format_number(fraction) << ',' << subset_ids.size() << ',' << samples << ','
        << format_number(means.chamfer) << ',' << (means.emd_normalized ? format_number(*means.emd_normalized) : "")
        << '\n';
    log << label << ": fraction=" << fraction << " sequences=" << subset_ids.size() << " samples=" << samples
        << '\n';
  }
  write_text_file(opts.output / "scaling.csv", csv.str());
  return 0;
}

}  // namespace spf::cli
