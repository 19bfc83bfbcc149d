// SPDX-License-Identifier: Apache-2.0
//
// nfcrb - wideband compressed-domain Cramer-Rao bounds for near-field arrays
// Copyright (C) 2026 The nfcrb authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include "nfcrb/experiment.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace YAML {
class Node;
}

namespace nfcrb::cli {

/// Thrown for anything the user can fix on the command line or in the config
/// file. Maps to exit code 1.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct PathSpec {
    double theta_deg = 40.0;
    double r_m = 5.0;
    double p = 1.0;
};

struct ExperimentConfig {
    // array
    int M = 256;
    double f_c_hz = 28e9;
    // ofdm
    double delta_f_hz = 120e3;
    double B_hz = 400e6;
    std::vector<double> B_sweep_hz;
    int Ks_max = 512;
    // paths
    std::vector<PathSpec> paths{PathSpec{}};
    // noise
    double snr_db = 10.0;
    std::optional<double> N0;
    // combiner
    std::string combiner_kind = "random";
    int N_RF = 16;
    std::vector<int> N_RF_sweep{4, 8, 16, 32, 64};
    std::uint64_t seed = 1;
    int seeds = 10;
    std::vector<std::uint64_t> seed_list_override;
    // snapshots
    int N = 64;
    // sweep
    std::vector<double> range_list_m;
    std::vector<double> mismatch_B_hz{100e6, 400e6, 800e6};
    std::vector<double> mismatch_range_m;
    std::optional<double> ebrd_m;
    // output
    std::string out_dir = "out";
    std::vector<std::string> formats{"csv", "json", "svg"};
    // run
    int workers = 1;

    ExperimentConfig();

    double noise_power() const;
    Scenario scenario() const;
    /// Scenario with the first path moved to `range_m`.
    Scenario scenario_at_range(double range_m) const;
    Combiner combiner(std::uint64_t seed_value, int n_rf) const;
    std::vector<std::uint64_t> seed_list() const;
    bool wants(const std::string &format) const;

    nlohmann::json to_json() const;
    /// Throws UsageError on out-of-range values.
    void validate() const;
};

/// Builds a config from a YAML tree. Unknown keys are rejected.
ExperimentConfig config_from_yaml(const YAML::Node &root);

/// Sets `dotted` (e.g. "ofdm.B_hz", "paths.0.r_m") in `root` to the YAML
/// value parsed from `value`. A bare comma list becomes a sequence.
void apply_override(YAML::Node &root, const std::string &dotted, const std::string &value);

/// Reads `path` (if given), applies overrides in order and validates.
ExperimentConfig load_config(const std::optional<std::string> &path,
                             const std::vector<std::pair<std::string, std::string>> &overrides);

/// Every dotted key the config understands ("paths.<i>.<field>" excluded).
const std::vector<std::string> &known_keys();

} // namespace nfcrb::cli
