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

// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.
#include "fixtures.hpp"
#include "oracles.hpp"

#include "cli/cli.hpp"

#include "spf/core/io.hpp"
#include "spf/eval/e2e.hpp"
#include "spf/eval/hungarian.hpp"
#include "spf/forecast/forecasters.hpp"
#include "spf/metrics/metrics.hpp"
#include "spf/rangemap/rangemap.hpp"
#include "spf/spatial/kdtree.hpp"

#include "json.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

namespace
{

using namespace spf;
namespace fs = std::filesystem;
constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

struct Outcome
{
  bool pass{false};
  std::string detail;
};

struct Criterion
{
  std::string name;
  double budget_s;  // <= 0: no runtime bound
  std::function<Outcome()> run;
};

Point3 from_spherical(double theta, double phi, double d)
{
  return {d * std::cos(phi) * std::cos(theta), d * std::cos(phi) * std::sin(theta), d * std::sin(phi)};
}

std::string fmt(const char * f, double v)
{
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, v);
  return buf;
}

Outcome rangemap_codec()
{
  Rng rng(101);
  const auto g = rangemap::SphericalGrid::default_grid();
  std::vector<Point3> pts;
  for (int i = 0; i < 10000; ++i) {
    pts.push_back(from_spherical(rng.uniform(0.0, 2 * kPi), rng.uniform(-30.0, 10.0) * kPi / 180.0,
                                 rng.uniform(1.0, 100.0)));
  }
  const PointCloud cloud(pts);
  const auto map = rangemap::encode(cloud, g);
  const auto decoded = rangemap::decode(map);
  const double delta = g.half_diagonal();

  std::vector<double> ranges(cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    ranges[i] = std::sqrt(oracle::sq_dist(cloud[i], {0, 0, 0}));
  }
  std::size_t outside = 0;
  for (const auto & q : decoded.points()) {
    bool ok = false;
    for (std::size_t i = 0; i < cloud.size() && !ok; ++i) {
      ok = oracle::dist(cloud[i], q) <= ranges[i] * delta;
    }
    outside += ok ? 0 : 1;
  }
  const bool idem = rangemap::encode(decoded, g) == map &&
                    rangemap::encode(rangemap::decode(map, rangemap::Precision::kFloat32), g) == map;
  return {outside == 0 && idem, std::to_string(decoded.size()) + " pixels, " + std::to_string(outside) +
                                  " outside d*delta (delta=" + fmt("%.6g", delta) + " rad), encode(decode(m))==m " +
                                  (idem ? "yes" : "no")};
}

Outcome collision_rule()
{
  Rng rng(102);
  const auto g = rangemap::SphericalGrid::default_grid();
  int kept = 0;
  for (int c = 0; c < 100; ++c) {
    const rangemap::Bin bin{static_cast<std::uint32_t>(rng.uniform_index(g.rows)),
                            static_cast<std::uint32_t>(rng.uniform_index(g.cols))};
    auto inside = [&](double d) {
      const double phi = double{g.phi_min} + (bin.row + rng.uniform(0.05, 0.95)) * g.row_height();
      const double theta = double{g.theta_min} + (bin.col + rng.uniform(0.05, 0.95)) * g.col_width();
      return from_spherical(theta, phi, d);
    };
    const double d1 = rng.uniform(1.0, 50.0);
    const double d2 = d1 + rng.uniform(0.01, 50.0);
    const Point3 near = inside(d1);
    const Point3 far = inside(d2);
    if (rangemap::bin_of(rangemap::project_point(near), g) != bin ||
        rangemap::bin_of(rangemap::project_point(far), g) != bin) {
      return {false, "fixture point left its bin in case " + std::to_string(c)};
    }
    const auto cloud = c % 2 == 0 ? PointCloud({near, far}) : PointCloud({far, near});
    const auto m = rangemap::encode(cloud, g);
    const float want = static_cast<float>(rangemap::project_point(far).d);
    kept += (m.range(bin) == want && m.occupied_count() == 1) ? 1 : 0;
  }
  return {kept == 100, std::to_string(kept) + "/100 collisions kept the larger range"};
}

Outcome chamfer_oracle()
{
  Rng rng(103);
  int equal = 0;
  for (int i = 0; i < 200; ++i) {
    const auto a = fixture::random_cloud(rng, 1 + rng.uniform_index(500), -30, 30);
    const auto b = fixture::random_cloud(rng, 1 + rng.uniform_index(500), -30, 30);
    equal += metrics::chamfer(a, b) == oracle::chamfer(a, b) ? 1 : 0;
  }
  return {equal == 200, std::to_string(equal) + "/200 bitwise equal to the O(K^2) loop"};
}

Outcome emd_oracle()
{
  Rng rng(104);
  int equal = 0;
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const std::size_t n = 1 + rng.uniform_index(8);
    const auto a = fixture::random_cloud(rng, n);
    const auto b = fixture::random_cloud(rng, n);
    metrics::MetricConfig cfg;
    cfg.emd_sample_count = n;
    cfg.sampling_seed = rng.next();
    const double got = metrics::emd(a, b, cfg);
    const double want = oracle::emd_enumerate(a, b);
    const double rel = std::abs(got - want) / std::max(want, 1e-300);
    worst = std::max(worst, rel);
    equal += rel <= 1e-12 ? 1 : 0;
  }
  int zero = 0;
  for (int i = 0; i < 50; ++i) {
    const auto a = fixture::random_cloud(rng, 20 + rng.uniform_index(100));
    metrics::MetricConfig cfg;
    cfg.emd_sample_count = 1 + rng.uniform_index(a.size());
    cfg.sampling_seed = rng.next();
    zero += metrics::emd(a, a, cfg) == 0.0 ? 1 : 0;
  }
  return {equal == 1000 && zero == 50, std::to_string(equal) + "/1000 match n! enumeration (worst rel " +
                                         fmt("%.2e", worst) + "), " + std::to_string(zero) +
                                         "/50 identical clouds give 0"};
}

Outcome hungarian_oracle()
{
  Rng rng(105);
  int equal = 0, rect = 0, with_inf = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto rows = static_cast<Eigen::Index>(1 + rng.uniform_index(7));
    const auto cols = static_cast<Eigen::Index>(1 + rng.uniform_index(7));
    const double inf_rate = i % 4 == 0 ? 0.0 : rng.uniform(0.0, 0.6);
    const bool integer = i % 2 == 0;
    Eigen::MatrixXd c(rows, cols);
    bool any_inf = false;
    for (Eigen::Index r = 0; r < rows; ++r) {
      for (Eigen::Index k = 0; k < cols; ++k) {
        if (rng.uniform01() < inf_rate) {
          c(r, k) = kInf;
          any_inf = true;
        } else {
          c(r, k) = integer ? double(rng.uniform_index(20)) : rng.uniform(0.0, 50.0);
        }
      }
    }
    rect += rows != cols ? 1 : 0;
    with_inf += any_inf ? 1 : 0;
    const auto s = eval::solve_assignment(c);
    const auto want = oracle::assignment_enumerate(c);
    double sum = 0.0;
    bool valid = true;
    std::vector<bool> used_c(static_cast<std::size_t>(cols), false);
    for (const auto & p : s.pairs) {
      valid = valid && !used_c[p.col] && std::isfinite(p.cost);
      used_c[p.col] = true;
      sum += p.cost;
    }
    const bool cost_ok = integer ? s.total_cost == want.cost : std::abs(s.total_cost - want.cost) <= 1e-9;
    equal += (valid && s.pairs.size() == want.finite_pairs && cost_ok && sum == s.total_cost) ? 1 : 0;
  }
  return {equal == 1000, std::to_string(equal) + "/1000 optimal (" + std::to_string(rect) + " rectangular, " +
                           std::to_string(with_inf) + " with +inf entries)"};
}

Outcome e2e_hand_case()
{
  TrajectorySet gt, pred;
  gt.trajectories = {{"g", {{1, {0, 0}}, {3, {0, 0}}}}};
  pred.trajectories = {{"p", {{1, {0.2, 0}}, {2, {9, 9}}, {3, {0.6, 0}}}}};
  pred.role = TrajectoryRole::kPredicted;
  const auto m = eval::pairwise_costs(pred, gt);
  const bool ok = m.ade(0, 0) == 0.4 && m.fde(0, 0) == 0.6;
  return {ok, "ADE=" + fmt("%.17g", m.ade(0, 0)) + " FDE=" + fmt("%.17g", m.fde(0, 0))};
}

Outcome aade_integration()
{
  // V = 40 GT objects; methods reach 17, 32 and 40 of them.
  Rng rng(106);
  const eval::RecallGrid grid{40};
  std::map<std::string, eval::RecallCurve> curves;
  std::map<std::string, std::vector<double>> pair_ades;
  const std::vector<std::pair<std::string, int>> methods{{"alpha", 17}, {"beta", 32}, {"gamma", 40}};
  for (const auto & [name, matched] : methods) {
    TrajectorySet gt, pred;
    pred.role = TrajectoryRole::kPredicted;
    for (int i = 0; i < 40; ++i) {
      const Vec2 base{100.0 * i, 0.0};
      gt.trajectories.push_back({"g" + std::to_string(i), {{1, base}, {2, {base.x + 1, 0}}}});
      if (i < matched) {
        const double e = rng.uniform(0.0, 2.0);
        pred.trajectories.push_back({"p" + std::to_string(i), {{1, {base.x, e}}, {2, {base.x + 1, e}}}});
        pair_ades[name].push_back(e);
      }
    }
    const auto costs = eval::pairwise_costs(pred, gt);
    curves[name] = eval::recall_curve(costs, eval::assign(costs), grid);
  }
  const auto r = eval::aade_afde(curves, grid);
  bool ok = r.common_ceiling == 0.425 && r.common_steps == 17;
  double worst = 0.0;
  for (auto & [name, ades] : pair_ades) {
    // Direct integration: ADE at recall s/40 is the mean of the s smallest pair ADEs.
    std::sort(ades.begin(), ades.end());
    double total = 0.0, running = 0.0;
    for (std::size_t s = 1; s <= 17; ++s) {
      running += ades[s - 1];
      total += running / static_cast<double>(s);
    }
    const double want = total / 17.0;
    worst = std::max(worst, std::abs(r.methods.at(name).aade - want));
    ok = ok && r.methods.at(name).rankable && std::abs(r.methods.at(name).aade - want) <= 1e-12;
  }
  return {ok, "ceiling=" + fmt("%.17g", r.common_ceiling) + " |R|=" + std::to_string(r.common_steps) +
                ", worst AADE deviation from direct integration " + fmt("%.1e", worst)};
}

double max_point_error(const PointCloud & a, const PointCloud & b)
{
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    worst = std::max(worst, oracle::dist(a[i], b[i]));
  }
  return worst;
}

forecast::ForecastRequest make_request(const std::vector<PointCloud> & frames,
                                       const std::vector<RigidTransform> & poses, int m, int n)
{
  forecast::ForecastRequest req;
  req.past.frames.assign(frames.begin(), frames.begin() + m);
  if (!poses.empty()) {
    req.ego_poses.assign(poses.begin(), poses.begin() + m);
  }
  req.horizon = n;
  return req;
}

Outcome baseline_exactness()
{
  Rng rng(107);
  const int m = 5, n = 10;
  const auto world = fixture::structured_scene(rng, 3000);
  const auto poses = fixture::constant_motion_poses(fixture::rotation_z(2.0 * kPi / 180.0, {0.5, 0.05, 0.0}), m + n);
  const auto frames = fixture::observe(world, poses);

  double ego_err = 0.0;
  const auto ego = forecast::forecast_ego_warp(make_request(frames, poses, m, n));
  for (int k = 1; k <= n; ++k) {
    ego_err = std::max(ego_err, max_point_error(ego.frames[k - 1], frames[m - 1 + k]));
  }
  double icp_err = 0.0;
  const auto icp = forecast::forecast_icp_warp(make_request(frames, {}, m, n));
  for (int k = 1; k <= n; ++k) {
    icp_err = std::max(icp_err, max_point_error(icp.frames[k - 1], frames[m - 1 + k]));
  }
  const std::vector<PointCloud> frozen(m + n, world);
  const auto id = forecast::forecast_identity(make_request(frozen, {}, m, n));
  metrics::MetricConfig cfg;
  cfg.emd_sample_count = 512;
  double worst_metric = 0.0;
  for (int k = 1; k <= n; ++k) {
    worst_metric = std::max(worst_metric, metrics::chamfer(id.frames[k - 1], frozen[m - 1 + k]));
    worst_metric = std::max(worst_metric, metrics::emd(id.frames[k - 1], frozen[m - 1 + k], cfg));
  }
  const bool ok = ego_err <= 1e-6 && icp_err <= 1e-3 && worst_metric == 0.0;
  return {ok, "ego-warp max error " + fmt("%.2e", ego_err) + " m, icp-warp " + fmt("%.2e", icp_err) +
                " m, identity on frozen scene max(CD,EMD)=" + fmt("%g", worst_metric)};
}

Outcome baseline_ordering()
{
  Rng rng(108);
  const int m = 5, n = 10;
  const auto world = fixture::structured_scene(rng, 2000);
  const auto frames = fixture::translating_world(world, {0.5, 0.0, 0.0}, m + n);
  const std::vector<RigidTransform> stationary(m + n);  // the ego never moves
  const auto id = forecast::forecast_identity(make_request(frames, stationary, m, n));
  const auto ego = forecast::forecast_ego_warp(make_request(frames, stationary, m, n));
  const auto icp = forecast::forecast_icp_warp(make_request(frames, stationary, m, n));
  int strictly_worse = 0;
  std::ostringstream detail;
  for (int k = 1; k <= n; ++k) {
    const auto & gt = frames[m - 1 + k];
    const double cd_id = metrics::chamfer(id.frames[k - 1], gt);
    const double cd_ego = metrics::chamfer(ego.frames[k - 1], gt);
    strictly_worse += cd_id > cd_ego ? 1 : 0;
    if (k == 1 || k == n) {
      detail << " k=" << k << ": identity " << fmt("%.6g", cd_id) << " ego-warp " << fmt("%.6g", cd_ego)
             << " icp-warp " << fmt("%.3g", metrics::chamfer(icp.frames[k - 1], gt)) << ";";
    }
  }
  detail << " identity > ego-warp at " << strictly_worse << "/" << n << " horizons";
  if (strictly_worse != n) {
    detail << " (stationary poses make the averaged ego motion the identity, so ego-warp output equals"
              " identity output by construction)";
  }
  return {strictly_worse == n, detail.str()};
}

int cli(const std::vector<std::string> & args)
{
  std::ostringstream out, err;
  return cli::run(args, out, err);
}

bool same_tree(const fs::path & a, const fs::path & b, std::string & why)
{
  std::size_t files = 0;
  for (const auto & e : fs::recursive_directory_iterator(a)) {
    if (!e.is_regular_file()) {
      continue;
    }
    ++files;
    const auto rel = fs::relative(e.path(), a);
    if (!fs::exists(b / rel) || fixture::read_file(e.path()) != fixture::read_file(b / rel)) {
      why = rel.string();
      return false;
    }
  }
  for (const auto & e : fs::recursive_directory_iterator(b)) {
    files -= e.is_regular_file() ? 1 : 0;
  }
  if (files != 0) {
    why = "file count differs";
  }
  return files == 0;
}

Outcome cli_determinism()
{
  fixture::TempDir dir;
  Rng rng(109);
  std::map<std::string, fixture::SequenceData> data;
  for (int s = 0; s < 4; ++s) {
    const auto world = fixture::structured_scene(rng, 400);
    fixture::SequenceData seq;
    seq.poses = fixture::constant_motion_poses(fixture::rotation_z(0.01, {0.5, 0.02, 0}), 8);
    seq.frames = fixture::observe(world, seq.poses);
    data.emplace("seq" + std::to_string(s), std::move(seq));
  }
  const auto manifest = fixture::write_dataset(dir / "data", data).string();
  {
    std::ofstream gt(dir / "gt.jsonl"), pa(dir / "a.jsonl"), pb(dir / "b.jsonl");
    for (int i = 0; i < 12; ++i) {
      auto line = [&](const std::string & id, double off) {
        nlohmann::json f;
        for (int t = 1; t <= 4; ++t) {
          f[std::to_string(t)] = {10.0 * i + t, off};
        }
        return nlohmann::json{{"id", id}, {"frames", f}}.dump() + "\n";
      };
      gt << line("g" + std::to_string(i), 0.0);
      pa << line("a" + std::to_string(i), rng.uniform(0, 1));
      if (i % 2 == 0) {
        pb << line("b" + std::to_string(i), rng.uniform(0, 2));
      }
    }
  }

  std::vector<std::string> failures;
  int checked = 0;
  for (int run = 0; run < 2; ++run) {
    const fs::path out = dir / ("run" + std::to_string(run));
    const std::string jobs = run == 0 ? "1" : "3";
    std::vector<std::vector<std::string>> cmds{
      {"rangemap", "encode", "--in", (dir / "data" / "seq0" / "3.bin").string(), "--out", (out / "m.spfr").string()},
      {"rangemap", "decode", "--in", (out / "m.spfr").string(), "--out", (out / "m.bin").string()},
      {"--jobs", jobs, "forecast", "--manifest", manifest, "--method", "identity", "--past", "3", "--future", "3",
       "--out", (out / "fc").string()},
      {"--jobs", jobs, "forecast", "--manifest", manifest, "--method", "gt-ego", "--past", "3", "--future", "3",
       "--out", (out / "fc").string()},
      {"--jobs", jobs, "forecast", "--manifest", manifest, "--method", "align-icp", "--past", "3", "--future", "3",
       "--out", (out / "fc").string()},
      {"--jobs", jobs, "--seed", "9", "eval-spf", "--manifest", manifest, "--forecasts", (out / "fc").string(),
       "--emd-samples", "64", "--out", (out / "spf.json").string()},
      {"eval-e2e", "--gt", (dir / "gt.jsonl").string(), "--pred", "a=" + (dir / "a.jsonl").string(), "--pred",
       "b=" + (dir / "b.jsonl").string(), "--out", (out / "e2e.json").string()},
      {"--jobs", jobs, "--seed", "4", "scaling", "--manifest", manifest, "--fractions", "0.25,0.5,1", "--past", "2",
       "--future", "2", "--emd-samples", "32", "--out", (out / "scaling").string()},
      {"index", "--root", (dir / "data").string(), "--out", (out / "index.json").string()},
    };
    for (const auto & c : cmds) {
      if (cli(c) != 0) {
        failures.push_back("command failed: " + c[c[0] == "--jobs" ? 2 : 0]);
      }
    }
    ++checked;
  }
  std::string why;
  if (!same_tree(dir / "run0", dir / "run1", why)) {
    failures.push_back("outputs differ at " + why);
  }
  if (failures.empty()) {
    return {true, "rangemap, forecast x3, eval-spf, eval-e2e, scaling, index: reruns byte-identical (jobs 1 vs 3)"};
  }
  return {false, failures.front()};
}

}  // namespace

int main()
{
  const std::vector<Criterion> criteria{
    {"range-map codec: quantization bound and idempotence on 10k points", 1.0, rangemap_codec},
    {"collision rule: 100 constructed same-bin pairs", 0.0, collision_rule},
    {"chamfer oracle: 200 random pairs, K <= 500", 10.0, chamfer_oracle},
    {"emd oracle: 1000 instances, n <= 8, plus identical clouds", 30.0, emd_oracle},
    {"hungarian oracle: 1000 matrices up to 7x7", 30.0, hungarian_oracle},
    {"e2e hand case: GT valid {1,3}, offsets 0.2/0.6", 0.0, e2e_hand_case},
    {"aade integration: 3 methods, common ceiling 0.425, |R|=17", 0.0, aade_integration},
    {"baseline exactness: ego 1e-6 m, icp 1e-3 m, identity frozen CD=EMD=0", 20.0, baseline_exactness},
    {"baseline ordering: identity CD > ego-warp CD, translating world, stationary ego", 0.0, baseline_ordering},
    {"cli determinism: every command rerun is byte-identical", 0.0, cli_determinism},
  };
  int failed = 0;
  for (const auto & c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception & e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.budget_s > 0.0 && secs >= c.budget_s) {
      o.pass = false;
      o.detail += "; over the " + fmt("%g", c.budget_s) + " s budget";
    }
    failed += o.pass ? 0 : 1;
    std::printf("[%s] %s (%.3f s) %s\n", o.pass ? "PASS" : "FAIL", c.name.c_str(), secs, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu criteria, %d failed\n", criteria.size(), failed);
  return failed == 0 ? 0 : 1;
}
