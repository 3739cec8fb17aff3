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

#include "leoisac/manifest.hpp"

#include <openssl/evp.h>

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace leoisac
{
    using nlohmann::json;

    std::string sha256_hex(const std::string &bytes)
    {
        unsigned char md[EVP_MAX_MD_SIZE];
        unsigned int len = 0;
        if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
            throw std::runtime_error("SHA-256 digest failed");
        static const char *hex = "0123456789abcdef";
        std::string out;
        for (unsigned int i = 0; i < len; ++i)
        {
            out.push_back(hex[md[i] >> 4]);
            out.push_back(hex[md[i] & 15]);
        }
        return out;
    }

    std::string file_sha256(const std::string &path)
    {
        std::ifstream f(path, std::ios::binary);
        if (!f)
            throw std::runtime_error("cannot read '" + path + "'");
        std::ostringstream ss;
        ss << f.rdbuf();
        return sha256_hex(ss.str());
    }

    json RunManifest::to_json() const
    {
        json t = json::array(), o = json::array();
        for (const auto &s : timings)
            t.push_back({{"stage", s.stage}, {"seconds", s.seconds}});
        for (const auto &f : outputs)
            o.push_back({{"path", f.path}, {"sha256", f.sha256}});
        return json{{"manifest", "leoisac-run"},
                    {"tool_version", tool_version},
                    {"command", command},
                    {"args", args},
                    {"config", config},
                    {"config_hash", config_hash},
                    {"seeds", seeds},
                    {"timings", t},
                    {"outputs", o},
                    {"summary", summary}};
    }

    bool RunManifest::looks_like_manifest(const json &j)
    {
        return j.is_object() && j.contains("manifest") && j.at("manifest") == "leoisac-run";
    }

    RunManifest RunManifest::from_json(const json &j)
    {
        if (!looks_like_manifest(j))
            throw std::invalid_argument("not a run manifest");
        RunManifest m;
        m.tool_version = j.at("tool_version").get<std::string>();
        m.command = j.at("command").get<std::string>();
        m.args = j.at("args");
        m.config = j.at("config");
        m.config_hash = j.at("config_hash").get<std::string>();
        m.seeds = j.at("seeds");
        for (const auto &t : j.at("timings"))
            m.timings.push_back({t.at("stage").get<std::string>(), t.at("seconds").get<double>()});
        for (const auto &o : j.at("outputs"))
            m.outputs.push_back({o.at("path").get<std::string>(), o.at("sha256").get<std::string>()});
        m.summary = j.value("summary", json::object());
        return m;
    }

    void RunManifest::write(const std::string &path) const
    {
        std::ofstream f(path, std::ios::binary | std::ios::trunc);
        if (!f)
            throw std::runtime_error("cannot write '" + path + "'");
        f << to_json().dump(2) << '\n';
    }
}
