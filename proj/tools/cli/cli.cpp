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

#include "cli.hpp"

#include "commands.hpp"
#include "json_config.hpp"

#include "spf/core/error.hpp"

#include <iostream>
#include <memory>

namespace spf::cli
{

namespace
{

void add_grid_options(CLI::App * cmd, GridOptions & g)
{
  cmd->add_option("--rows", g.rows, "Range map rows (elevation bins)")->capture_default_str();
  cmd->add_option("--cols", g.cols, "Range map columns (azimuth bins)")->capture_default_str();
  cmd->add_option("--phi-min", g.phi_min_deg, "Lowest elevation, degrees")->capture_default_str();
  cmd->add_option("--phi-max", g.phi_max_deg, "Highest elevation, degrees")->capture_default_str();
  cmd->add_option("--theta-min", g.theta_min_deg, "Azimuth start, degrees")->capture_default_str();
  cmd->add_option("--theta-max", g.theta_max_deg, "Azimuth end, degrees")->capture_default_str();
}

void add_horizon_options(CLI::App * cmd, int & past, int & future, double & past_s, double & future_s, int & stride)
{
  cmd->add_option("--past", past, "Past frames M");
  cmd->add_option("--future", future, "Future frames N");
  cmd->add_option("--past-seconds", past_s, "Past duration; M = round(seconds / frame_period)");
  cmd->add_option("--future-seconds", future_s, "Future duration; N = round(seconds / frame_period)");
  cmd->add_option("--stride", stride, "Sliding-window stride in frames")->capture_default_str();
}

}  // namespace

int run(const std::vector<std::string> & args, std::ostream & out, std::ostream & err)
{
  CLI::App app{"Sequential point cloud forecasting toolkit"};
  app.name("spf");
  app.require_subcommand(1);
  app.fallthrough();
  app.config_formatter(std::make_shared<JsonConfig>());
  app.set_config("--config", "", "JSON file with option defaults");

  GlobalOptions global;
  app.add_option("--seed", global.seed, "Seed for every sampled quantity")->capture_default_str();
  app.add_option("--jobs", global.jobs, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);

  RangemapOptions rm;
  auto * rm_cmd = app.add_subcommand("rangemap", "Convert between KITTI scans and SPFR range maps");
  rm_cmd->add_option("direction", rm.direction, "encode | decode")
    ->required()
    ->check(CLI::IsMember({"encode", "decode"}));
  rm_cmd->add_option("--in", rm.input, "Input scan (.bin/.ply) or range map")->required();
  rm_cmd->add_option("--out", rm.output, "Output range map or .bin scan")->required();
  add_grid_options(rm_cmd, rm.grid);

  ForecastOptions fc;
  auto * fc_cmd = app.add_subcommand("forecast", "Run a baseline forecaster over sliding windows");
  fc_cmd->add_option("--manifest", fc.manifest, "Dataset manifest")->required();
  fc_cmd->add_option("--seq", fc.sequences, "Sequence id (repeatable; default all)");
  fc_cmd->add_option("--method", fc.method, "identity | gt-ego | align-icp")->capture_default_str();
  add_horizon_options(fc_cmd, fc.past_frames, fc.future_frames, fc.past_seconds, fc.future_seconds, fc.stride);
  auto * anchor = fc_cmd->add_option("--anchor", fc.anchor, "Only the window whose last past frame is t");
  fc_cmd->add_option("--out", fc.output, "Output directory")->required();
  fc_cmd->add_option("--icp-max-iter", fc.icp.max_iter, "ICP iteration cap")->capture_default_str();
  fc_cmd->add_option("--icp-tol", fc.icp.tol, "ICP residual tolerance, m")->capture_default_str();
  fc_cmd->add_option("--icp-max-corr", fc.icp.max_corr_dist, "ICP correspondence cutoff, m")->capture_default_str();

  EvalSpfOptions es;
  auto * es_cmd = app.add_subcommand("eval-spf", "Chamfer/EMD of forecast frames against the manifest");
  es_cmd->add_option("--manifest", es.manifest, "Dataset manifest")->required();
  es_cmd->add_option("--forecasts", es.forecasts, "Forecast directory")->required();
  es_cmd->add_option("--out", es.output, "Report JSON")->required();
  es_cmd->add_option("--emd-samples", es.emd_samples, "Points per cloud for EMD")->capture_default_str();
  es_cmd->add_flag("--no-emd", es.no_emd, "Skip EMD");

  EvalE2eOptions ee;
  auto * ee_cmd = app.add_subcommand("eval-e2e", "AADE/AFDE of predicted trajectories");
  ee_cmd->add_option("--gt", ee.gt, "Ground-truth trajectories (JSON lines)")->required();
  ee_cmd->add_option("--pred", ee.preds, "name=path of predicted trajectories (repeatable)")->required();
  ee_cmd->add_option("--L", ee.recall_samples, "Recall grid size")->capture_default_str();
  ee_cmd->add_option("--match-space", ee.match_space, "future | past | full")->capture_default_str();
  ee_cmd->add_option("--match-cost", ee.match_cost, "ade | fde")->capture_default_str();
  ee_cmd->add_option("--out", ee.output, "Report JSON")->required();

  ScalingOptions sc;
  auto * sc_cmd = app.add_subcommand("scaling", "Training-data scaling harness");
  sc_cmd->add_option("--manifest", sc.manifest, "Training manifest")->required();
  sc_cmd->add_option("--eval-manifest", sc.eval_manifest, "Evaluation manifest (default: training manifest)");
  sc_cmd->add_option("--fractions", sc.fractions, "Training fractions in (0, 1]")->required()->delimiter(',');
  sc_cmd->add_option("--out", sc.output, "Output directory")->required();
  sc_cmd->add_option("--method", sc.method, "Baseline evaluated when no forecast root is given")->capture_default_str();
  sc_cmd->add_option("--forecast-root", sc.forecast_root, "Directory holding subset_<i>/ forecast trees");
  add_horizon_options(sc_cmd, sc.past_frames, sc.future_frames, sc.past_seconds, sc.future_seconds, sc.stride);
  sc_cmd->add_option("--emd-samples", sc.emd_samples, "Points per cloud for EMD")->capture_default_str();
  sc_cmd->add_flag("--no-emd", sc.no_emd, "Skip EMD");

  IndexOptions ix;
  auto * ix_cmd = app.add_subcommand("index", "Build a manifest from a directory of scan sequences");
  ix_cmd->add_option("--root", ix.root, "Directory with one subdirectory per sequence")->required();
  ix_cmd->add_option("--out", ix.output, "Manifest JSON to write")->required();
  ix_cmd->add_option("--frame-period", ix.frame_period, "Seconds between frames")->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError & e) {
    return app.exit(e, out, err);
  }
  fc.has_anchor = anchor->count() > 0;

  try {
    if (*rm_cmd) {
      return cmd_rangemap(rm, global, err);
    }
    if (*fc_cmd) {
      return cmd_forecast(fc, global, err);
    }
    if (*es_cmd) {
      return cmd_eval_spf(es, global, err);
    }
    if (*ee_cmd) {
      return cmd_eval_e2e(ee, global, err);
    }
    if (*sc_cmd) {
      return cmd_scaling(sc, global, err);
    }
    if (*ix_cmd) {
      return cmd_index(ix, global, err);
    }
  } catch (const std::exception & e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

int run(int argc, const char * const * argv)
{
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) {
    args.emplace_back(argv[i]);
  }
  return run(args, std::cout, std::cerr);
}

}  // namespace spf::cli
