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

#include "cli/config.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace nfcrb::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 1,
    kExitNumerical = 2,
    kExitVerification = 3,
};

struct CommandResult {
    int exit_code = kExitOk;
    /// Also written as <command>.json when the json format is enabled.
    nlohmann::json summary;
    std::vector<std::filesystem::path> files;
};

CommandResult cmd_mismatch(const ExperimentConfig &cfg);
CommandResult cmd_sweep_bandwidth(const ExperimentConfig &cfg);
CommandResult cmd_sweep_range(const ExperimentConfig &cfg);
CommandResult cmd_sweep_nrf(const ExperimentConfig &cfg);
CommandResult cmd_decompose(const ExperimentConfig &cfg);
CommandResult cmd_verify(const ExperimentConfig &cfg, bool inject_fault = false);

/// Full command line entry point: parses `args` (without the program name),
/// runs the subcommand and maps failures to exit codes.
int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace nfcrb::cli
