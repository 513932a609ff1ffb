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

#ifndef SPF__TOOLS__JSON_CONFIG_HPP_
#define SPF__TOOLS__JSON_CONFIG_HPP_

#include "CLI11.hpp"
#include "json.hpp"

#include <istream>
#include <string>
#include <vector>

namespace spf::cli
{

/// Lets CLI11 read option defaults from a JSON object. Nested objects
/// address subcommands: {"seed": 3, "eval-spf": {"emd-samples": 256}}.
class JsonConfig : public CLI::Config
{
public:
  std::string to_config(const CLI::App *, bool, bool, std::string) const override
  {
    return "{}";
  }

  std::vector<CLI::ConfigItem> from_config(std::istream & input) const override
  {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(input);
    } catch (const nlohmann::json::parse_error & e) {
      throw CLI::ConversionError(std::string("config file is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) {
      throw CLI::ConversionError("config file must hold a JSON object");
    }
    std::vector<CLI::ConfigItem> items;
    collect(doc, {}, items);
    return items;
  }

private:
  static std::string scalar(const nlohmann::json & v)
  {
    if (v.is_string()) {
      return v.get<std::string>();
    }
    if (v.is_boolean()) {
      return v.get<bool>() ? "true" : "false";
    }
    return v.dump();
  }

  static void collect(const nlohmann::json & node, const std::vector<std::string> & parents,
                      std::vector<CLI::ConfigItem> & items)
  {
    for (auto it = node.begin(); it != node.end(); ++it) {
      if (it->is_object()) {
        auto nested = parents;
        nested.push_back(it.key());
        collect(*it, nested, items);
        continue;
      }
      CLI::ConfigItem item;
      item.parents = parents;
      item.name = it.key();
      if (it->is_array()) {
        for (const auto & v : *it) {
          item.inputs.push_back(scalar(v));
        }
      } else {
        item.inputs.push_back(scalar(*it));
      }
      items.push_back(std::move(item));
    }
  }
};

}  // namespace spf::cli

#endif  // SPF__TOOLS__JSON_CONFIG_HPP_
