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

#ifndef SPF__TOOLS__COMMANDS_HPP_
#define SPF__TOOLS__COMMANDS_HPP_

#include "spf/forecast/icp.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace spf::cli
{

struct GlobalOptions
{
  std::uint64_t seed{0};
  std::size_t jobs{1};
};

struct GridOptions
{
  std::uint32_t rows{120};
  std::uint32_t cols{1024};
  double phi_min_deg{-30.0};
  double phi_max_deg{10.0};
  double theta_min_deg{0.0};
  double theta_max_deg{360.0};
};

struct RangemapOptions
{
  std::string direction;  // "encode" or "decode"
  std::filesystem::path input;
  std::filesystem::path output;
  GridOptions grid;
};

struct ForecastOptions
{
  std::filesystem::path manifest;
  std::vector<std::string> sequences;  // empty = all
  std::string method{"identity"};
  int past_frames{0};
  int future_frames{0};
  double past_seconds{0.0};
  double future_seconds{0.0};
  int stride{1};
  int anchor{-1};  // >= 0 selects a single window
  bool has_anchor{false};
  std::filesystem::path output;
  forecast::IcpParams icp;
};

struct EvalSpfOptions
{
  std::filesystem::path manifest;
  std::filesystem::path forecasts;
  std::filesystem::path output;
  std::size_t emd_samples{1024};
  bool no_emd{false};
};

struct EvalE2eOptions
{
  std::filesystem::path gt;
  std::vector<std::string> preds;  // "name=path"
  std::size_t recall_samples{40};
  std::string match_space{"future"};
  std::string match_cost{"ade"};
  std::filesystem::path output;
};

struct ScalingOptions
{
  std::filesystem::path manifest;
  std::filesystem::path eval_manifest;
  std::vector<double> fractions;
  std::filesystem::path output;
  std::string method{"identity"};
  int past_frames{0};
  int future_frames{0};
  double past_seconds{0.0};
  double future_seconds{0.0};
  int stride{1};
  std::size_t emd_samples{1024};
  bool no_emd{false};
  std::filesystem::path forecast_root;
};

struct IndexOptions
{
  std::filesystem::path root;
  std::filesystem::path output;
  double frame_period{0.1};
};

// Each command returns the process exit code; diagnostics go to `log`.
int cmd_rangemap(const RangemapOptions & opts, const GlobalOptions & global, std::ostream & log);
int cmd_forecast(const ForecastOptions & opts, const GlobalOptions & global, std::ostream & log);
int cmd_eval_spf(const EvalSpfOptions & opts, const GlobalOptions & global, std::ostream & log);
int cmd_eval_e2e(const EvalE2eOptions & opts, const GlobalOptions & global, std::ostream & log);
int cmd_scaling(const ScalingOptions & opts, const GlobalOptions & global, std::ostream & log);
int cmd_index(const IndexOptions & opts, const GlobalOptions & global, std::ostream & log);

/// Seeded nested subsets: sorted ids, one permutation, prefixes of it.
std::vector<std::string> subset_sequences(const std::vector<std::string> & ids, double fraction, std::uint64_t seed);

}  // namespace spf::cli

#endif  // SPF__TOOLS__COMMANDS_HPP_
