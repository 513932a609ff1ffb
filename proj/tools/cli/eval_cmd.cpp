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
#include "spf/eval/e2e.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

namespace spf::cli
{

namespace fs = std::filesystem;
using nlohmann::json;

namespace
{

struct ForecastDir
{
  fs::path dir;
  std::string method;
  std::string window;
  std::string sequence;
  int anchor_t{0};
  std::vector<int> frames;
};

std::vector<fs::path> sorted_children(const fs::path & dir, bool directories)
{
  std::vector<fs::path> out;
  for (const auto & entry : fs::directory_iterator(dir)) {
    if (directories ? entry.is_directory() : entry.is_regular_file()) {
      out.push_back(entry.path());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<int> parse_int(const std::string & s)
{
  std::size_t used = 0;
  try {
    const int v = std::stoi(s, &used);
    if (used == s.size()) {
      return v;
    }
  } catch (const std::exception &) {
  }
  return std::nullopt;
}

ForecastDir describe(const fs::path & window_dir, const fs::path & method_dir)
{
  ForecastDir fd;
  fd.dir = method_dir;
  fd.method = method_dir.filename().string();
  fd.window = window_dir.filename().string();
  const fs::path sidecar = method_dir / "forecast.json";
  if (fs::exists(sidecar)) {
    std::ifstream in(sidecar);
    json doc;
    try {
      doc = json::parse(in);
      fd.sequence = doc.at("sequence").get<std::string>();
      fd.anchor_t = doc.at("anchor_t").get<int>();
      fd.frames = doc.at("frames").get<std::vector<int>>();
    } catch (const json::exception & e) {
      throw Error(sidecar.string() + ": invalid forecast sidecar (" + e.what() + ")");
    }
    return fd;
  }
  // External forecasts without a sidecar: the directory is the sequence and
  // frame files are named by their index.
  fd.sequence = fd.window;
  for (const auto & file : sorted_children(method_dir, false)) {
    if (file.extension() != ".bin") {
      continue;
    }
    if (auto t = parse_int(file.stem().string())) {
      fd.frames.push_back(*t);
    }
  }
  std::sort(fd.frames.begin(), fd.frames.end());
  if (fd.frames.empty()) {
    throw Error(method_dir.string() + ": no forecast frames found");
  }
  fd.anchor_t = fd.frames.front() - 1;
  return fd;
}

WindowScore score_dir(const DatasetManifest & manifest, const ForecastDir & fd, const ScoreOptions & opts)
{
  WindowScore ws;
  ws.window = fd.window;
  ws.sequence = fd.sequence;
  ws.anchor_t = fd.anchor_t;
  for (int t : fd.frames) {
    const fs::path pred_path = fd.dir / (std::to_string(t) + ".bin");
    if (!fs::exists(pred_path)) {
      throw Error(fd.dir.string() + ": missing forecast frame " + pred_path.filename().string());
    }
    const auto & gt_frame = [&]() -> const ManifestFrame & {
      try {
        return frame_at(manifest, fd.sequence, t);
      } catch (const Error & e) {
        throw Error("frame misalignment in " + fd.dir.string() + ": " + e.what());
      }
    }();
    const auto pred = load_scan(pred_path);
    const auto gt = load_scan(gt_frame.scan);
    try {
      ws.frames.push_back(score_frame(pred, gt, t, t - fd.anchor_t, opts));
    } catch (const Error & e) {
      throw Error(fd.dir.string() + " frame " + std::to_string(t) + ": " + e.what());
    }
    // Correspondences of frame t link the previous frame to it; flows are
    // measurable when the forecast is point-aligned with that frame.
    if (t == fd.anchor_t + 1 && gt_frame.corr) {
      const auto source = load_scan(frame_at(manifest, fd.sequence, fd.anchor_t).scan);
      if (source.size() == pred.size()) {
        const auto corr = load_correspondences(*gt_frame.corr);
        ws.ppfe = metrics::ppfe(source, pred, gt, corr);
      }
    }
  }
  return ws;
}

std::pair<std::string, fs::path> split_pred_arg(const std::string & arg)
{
  const auto eq = arg.find('=');
  if (eq == std::string::npos) {
    const fs::path p(arg);
    return {p.stem().string(), p};
  }
  if (eq == 0) {
    throw Error("prediction argument '" + arg + "' has an empty method name");
  }
  return {arg.substr(0, eq), fs::path(arg.substr(eq + 1))};
}

eval::MatchSpace parse_space(const std::string & s)
{
  for (auto v : {eval::MatchSpace::kFuture, eval::MatchSpace::kPast, eval::MatchSpace::kFull}) {
    if (s == eval::to_string(v)) {
      return v;
    }
  }
  throw Error("unknown match space '" + s + "' (expected future, past or full)");
}

eval::MatchCost parse_cost(const std::string & s)
{
  if (s == "ade") {
    return eval::MatchCost::kAde;
  }
  if (s == "fde") {
    return eval::MatchCost::kFde;
  }
  throw Error("unknown match cost '" + s + "' (expected ade or fde)");
}

}  // namespace

std::map<std::string, std::vector<WindowScore>> evaluate_forecast_tree(
  const DatasetManifest & manifest, const fs::path & root, const ScoreOptions & opts, std::size_t jobs)
{
  if (!fs::is_directory(root)) {
    throw Error("forecast directory '" + root.string() + "' does not exist");
  }
  std::vector<ForecastDir> dirs;
  for (const auto & window_dir : sorted_children(root, true)) {
    for (const auto & method_dir : sorted_children(window_dir, true)) {
      dirs.push_back(describe(window_dir, method_dir));
    }
  }
  if (dirs.empty()) {
    throw Error("no forecasts found under '" + root.string() + "'");
  }
  std::vector<WindowScore> scores(dirs.size());
  parallel_for(dirs.size(), jobs, [&](std::size_t i) { scores[i] = score_dir(manifest, dirs[i], opts); });

  std::map<std::string, std::vector<WindowScore>> by_method;
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    by_method[dirs[i].method].push_back(std::move(scores[i]));
  }
  return by_method;
}

int cmd_eval_spf(const EvalSpfOptions & opts, const GlobalOptions & global, std::ostream & log)
{
  const auto manifest = load_manifest(opts.manifest);
  ScoreOptions score_opts;
  score_opts.metric.emd_sample_count = opts.emd_samples;
  score_opts.metric.sampling_seed = global.seed;
  score_opts.metric.validate();
  score_opts.with_emd = !opts.no_emd;

  const auto by_method = evaluate_forecast_tree(manifest, opts.forecasts, score_opts, global.jobs);

  json report;
  report["aggregation"] = "per-frame mean within each window, then mean over windows";
  if (score_opts.with_emd) {
    report["emd_sample_count"] = score_opts.metric.emd_sample_count;
    report["seed"] = score_opts.metric.sampling_seed;
  }
  json methods = json::object();
  for (const auto & [method, windows] : by_method) {
    methods[method] = method_report(windows, score_opts);
    const auto mean = mean_over_windows(windows);
    log << method << ": windows=" << windows.size() << " chamfer=" << mean.chamfer
        << " chamfer_normalized=" << mean.chamfer_normalized;
    if (mean.emd) {
      log << " emd=" << *mean.emd_normalized;
    }
    log << '\n';
  }
  report["methods"] = std::move(methods);
  write_text_file(opts.output, report.dump(2) + "\n");
  return 0;
}

int cmd_eval_e2e(const EvalE2eOptions & opts, const GlobalOptions &, std::ostream & log)
{
  const eval::RecallGrid grid{opts.recall_samples};
  grid.validate();
  const auto space = parse_space(opts.match_space);
  const auto cost = parse_cost(opts.match_cost);
  const auto gt = load_trajectories(opts.gt, TrajectoryRole::kGroundTruth);
  if (gt.empty()) {
    throw Error(opts.gt.string() + ": no ground-truth trajectories");
  }
  if (opts.preds.empty()) {
    throw Error("at least one --pred name=path is required");
  }

  std::map<std::string, eval::RecallCurve> curves;
  std::map<std::string, std::size_t> pred_counts;
  for (const auto & arg : opts.preds) {
    const auto [name, path] = split_pred_arg(arg);
    if (curves.count(name)) {
      throw Error("method name \"" + name + "\" given twice");
    }
    const auto pred = load_trajectories(path, TrajectoryRole::kPredicted);
    pred_counts[name] = pred.size();
    if (pred.empty()) {
      eval::RecallCurve empty;
      empty.gt_count = gt.size();
      curves.emplace(name, empty);
      continue;
    }
    const auto costs = eval::pairwise_costs(pred, gt, space);
    const auto assignment = eval::assign(costs, cost);
    curves.emplace(name, eval::recall_curve(costs, assignment, grid, cost));
  }

  const auto summary = eval::aade_afde(curves, grid);
  json methods = json::object();
  for (const auto & [name, score] : summary.methods) {
    const auto & curve = curves.at(name);
    json m;
    m["rankable"] = score.rankable;
    m["max_recall"] = score.max_recall;
    m["true_positives_at_max_recall"] = curve.max_tp;
    m["predicted_count"] = pred_counts.at(name);
    m["aade"] = score.rankable ? json(score.aade) : json(nullptr);
    m["afde"] = score.rankable ? json(score.afde) : json(nullptr);
    json samples = json::array();
    for (const auto & s : curve.samples) {
      samples.push_back(
        {{"recall", s.target_recall}, {"achieved_recall", s.recall}, {"ade", s.ade}, {"fde", s.fde},
         {"threshold", s.threshold}});
    }
    m["curve"] = std::move(samples);
    methods[name] = std::move(m);
    if (!score.rankable) {
      log << "warning: method \"" << name << "\" is unrankable: max recall " << score.max_recall
          << " is below the first grid recall " << grid.recall(1) << '\n';
    } else {
      log << name << ": AADE=" << score.aade << " AFDE=" << score.afde << " max_recall=" << score.max_recall
          << '\n';
    }
  }

  json report;
  report["methods"] = std::move(methods);
  report["common_recall_ceiling"] = summary.common_ceiling;
  report["common_recall_count"] = summary.common_steps;
  report["ground_truth_count"] = gt.size();
  report["grid"] = {{"L", grid.samples}};
  report["matching"] = {{"space", eval::to_string(space)}, {"cost", eval::to_string(cost)}};
  write_text_file(opts.output, report.dump(2) + "\n");
  log << "common recall ceiling " << summary.common_ceiling << " over " << summary.common_steps
      << " grid recalls\n";
  return 0;
}

}  // namespace spf::cli
