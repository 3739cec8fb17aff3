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

#ifndef LEOISAC_MANIFEST_HPP
#define LEOISAC_MANIFEST_HPP

#include <json.hpp>

#include <string>
#include <vector>

namespace leoisac
{
    inline constexpr const char *kToolVersion = "0.1.0";

    std::string sha256_hex(const std::string &bytes);
    std::string file_sha256(const std::string &path);

    struct StageTiming
    {
        std::string stage;
        double seconds = 0;
    };

    struct OutputFile
    {
        std::string path; // relative to the output directory
        std::string sha256;
    };

    // Everything needed to rerun a command: the resolved config, the command and its arguments, and the seeds.
    // Passing a manifest as --config replays the run.
    struct RunManifest
    {
        std::string tool_version = kToolVersion;
        std::string command;
        nlohmann::json args = nlohmann::json::object();
        nlohmann::json config = nlohmann::json::object();
        std::string config_hash;
        nlohmann::json seeds = nlohmann::json::object();
        std::vector<StageTiming> timings;
        std::vector<OutputFile> outputs;
        nlohmann::json summary = nlohmann::json::object();

        nlohmann::json to_json() const;
        static RunManifest from_json(const nlohmann::json &j);
        static bool looks_like_manifest(const nlohmann::json &j);
        void write(const std::string &path) const;
    };
}

#endif
