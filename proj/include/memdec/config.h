// Copyright 2026 The memdec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MEMDEC_CONFIG_H
#define MEMDEC_CONFIG_H

#include <string>
#include <string_view>
#include <vector>

#include "memdec/evaluation.h"

namespace memdec {

struct RunConfig {
    ExperimentConfig experiment;
    std::vector<Scheme> schemes = {Scheme::Baseline, Scheme::FpMnd, Scheme::HwaMnd, Scheme::DsMnd};
    std::string output_dir = "memdec_out";

    friend bool operator==(const RunConfig &, const RunConfig &) = default;
};

/// Parses the `key = value` format. Blank lines and `#` comments are ignored, unknown keys
/// are rejected, and every problem found is reported in one ConfigError with its line number.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string &path);

/// Writes every key; parse_config(serialize_config(c)) == c.
std::string serialize_config(const RunConfig &config);

/// Names of all accepted keys, in file order.
const std::vector<std::string> &config_keys();

}  // namespace memdec

#endif
