// SPDX-License-Identifier: Apache-2.0
//
// leoisac: bistatic LEO integrated sensing and communication toolkit
// Copyright (C) 2026 The leoisac Authors
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

#ifndef LEOISAC_COMMANDS_HPP
#define LEOISAC_COMMANDS_HPP

#include "leoisac/manifest.hpp"
#include "leoisac/scenario.hpp"

#include <string>

namespace leoisac
{
    // Exit codes shared by every subcommand
    inline constexpr int kExitOk = 0;
    inline constexpr int kExitError = 1;
    inline constexpr int kExitConfig = 2;
    inline constexpr int kExitInfeasible = 3;
    inline constexpr int kExitIterCap = 4;

    // One subcommand invocation. `args` holds the subcommand options; missing keys take their defaults and the
    // completed set is recorded in the manifest. `workers` changes scheduling only, never the outputs.
    struct CommandRequest
    {
        std::string command; // pathloss, optimize, minrate-sweep, beampattern, music, track
        nlohmann::json args = nlohmann::json::object();
        ScenarioConfig cfg;
        std::string out_dir = ".";
        int workers = 1;
    };

    struct CommandResult
    {
        int exit_code = kExitOk;
        RunManifest manifest;
        std::string manifest_path;
    };

    // Writes the CSVs and <command>_manifest.json into out_dir. Throws ConfigError for invalid arguments.
    CommandResult run_command(const CommandRequest &req);

    // Reruns the command recorded in a manifest into out_dir
    CommandResult replay_manifest(const RunManifest &m, const std::string &out_dir, int workers);

    // Loads a config file, or the config stored in a run manifest
    ScenarioConfig load_config_or_manifest(const std::string &path, const std::string &profile_override = "");

    const std::vector<std::string> &command_names();
}

#endif
