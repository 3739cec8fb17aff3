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

#include "leoisac/commands.hpp"
#include "leoisac/experiments.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <fstream>
#include <iostream>

using namespace leoisac;
using nlohmann::json;

namespace
{
    struct Globals
    {
        std::string config;
        std::string profile = "desk";
        std::string out_dir = "out";
        std::uint64_t seed = 0;
        bool seed_set = false;
        int workers = 1;
    };

    struct Overrides
    {
        std::string mode;
        double p_t_dbw = 0;
        bool p_t_set = false;
    };

    ScenarioConfig resolve_config(const Globals &g, const Overrides &o)
    {
        ScenarioConfig cfg = g.config.empty() ? ScenarioConfig::for_profile(g.profile)
                                              : load_config_or_manifest(g.config, g.profile);
        if (g.seed_set)
            cfg.seed = g.seed;
        if (!o.mode.empty())
            cfg.mode = o.mode;
        if (o.p_t_set)
            cfg.p_t_dbw = o.p_t_dbw;
        cfg.validate();
        return cfg;
    }

    void add_overrides(CLI::App *sub, Overrides &o)
    {
        sub->add_option("--mode", o.mode, "Transmission mode, e.g. rsma-isac-sic or sdma-comm-only");
        sub->add_option_function<double>(
            "--p-t-dbw", [&o](double v) { o.p_t_dbw = v, o.p_t_set = true; }, "Transmit power in dBW");
    }

    void report(const CommandResult &r)
    {
        std::cout << fmt::format("{}: exit {}", r.manifest.command, r.exit_code) << '\n';
        for (const auto &f : r.manifest.outputs)
            std::cout << "  wrote " << f.path << '\n';
        std::cout << "  manifest " << r.manifest_path << '\n';
        if (!r.manifest.summary.empty())
            std::cout << r.manifest.summary.dump(2) << '\n';
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"leoisac: bistatic LEO ISAC simulator and precoder optimizer"};
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    app.add_option("--config", g.config, "Scenario config (JSON) or a run manifest");
    app.add_option("--profile", g.profile, "Base profile when the config does not name one")
        ->check(CLI::IsMember({"desk", "paper"}));
    app.add_option("--out-dir", g.out_dir, "Output directory");
    app.add_option_function<std::uint64_t>(
        "--seed", [&g](std::uint64_t v) { g.seed = v, g.seed_set = true; }, "Waveform and noise seed");
    app.add_option("--workers", g.workers, "Concurrent sweep points")->check(CLI::PositiveNumber);

    json args = json::object();
    Overrides ov;
    std::string command;

    auto *pl = app.add_subcommand("pathloss", "Echo path loss against target altitude");
    pl->add_option_function<double>("--alt-min", [&](double v) { args["alt_min_km"] = v; }, "Lowest altitude, km");
    pl->add_option_function<double>("--alt-max", [&](double v) { args["alt_max_km"] = v; }, "Highest altitude, km");
    pl->add_option_function<int>("--steps", [&](int v) { args["steps"] = v; }, "Number of altitudes");

    auto *op = app.add_subcommand("optimize", "Design one precoder");
    add_overrides(op, ov);

    auto *ms = app.add_subcommand("minrate-sweep", "Minimum rate against transmit power for each mode");
    ms->add_option_function<std::vector<double>>(
          "--power-list", [&](const std::vector<double> &v) { args["power_list_dbw"] = v; }, "Powers in dBW")
        ->delimiter(',');
    ms->add_option_function<std::vector<std::string>>(
          "--modes",
          [&](const std::vector<std::string> &v) {
              if (!(v.size() == 1 && v[0] == "all"))
                  args["modes"] = v;
          },
          "Comma-separated modes or 'all'")
        ->delimiter(',');
    ms->add_option_function<int>("--drops", [&](int v) { args["drops"] = v; }, "User drops per point");

    auto *bp = app.add_subcommand("beampattern", "Transmit beampatterns and power ratios of a designed precoder");
    add_overrides(bp, ov);
    bp->add_option_function<double>("--step-deg", [&](double v) { args["step_deg"] = v; }, "Angle grid step");

    auto *mu = app.add_subcommand("music", "MUSIC angle spectrum of the simulated echo");
    add_overrides(mu, ov);
    auto *tr = app.add_subcommand("track", "MUSIC plus joint delay/Doppler/AOD matched filter");
    add_overrides(tr, ov);
    for (auto *sub : {mu, tr})
    {
        sub->add_option_function<double>("--doppler-hz", [&](double v) { args["doppler_hz"] = v; },
                                          "Target Doppler shift");
        sub->add_flag_function("--noise-free", [&](std::int64_t) { args["noise"] = false; }, "Omit receiver noise");
    }
    tr->add_option_function<double>("--aoa-offset-deg", [&](double v) { args["aoa_offset_deg"] = v; },
                                    "Corrupt the estimated AOA by this many degrees on both angles");
    tr->add_flag_function("--true-aoa", [&](std::int64_t) { args["use_music"] = false; },
                          "Skip MUSIC and use the true grid AOA");

    std::string manifest_path;
    auto *rp = app.add_subcommand("replay", "Rerun the command recorded in a run manifest");
    rp->add_option("--manifest", manifest_path, "Run manifest")->required();

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try
    {
        if (rp->parsed())
        {
            std::ifstream in(manifest_path);
            if (!in)
                throw ConfigError("cannot open manifest '" + manifest_path + "'");
            json j;
            try
            {
                j = json::parse(in);
            }
            catch (const json::exception &e)
            {
                throw ConfigError(std::string("manifest parse error: ") + e.what());
            }
            const auto r = replay_manifest(RunManifest::from_json(j), g.out_dir, g.workers);
            report(r);
            return r.exit_code;
        }

        CommandRequest req;
        for (auto *sub : app.get_subcommands())
            req.command = sub->get_name();
        req.args = args;
        req.cfg = resolve_config(g, ov);
        req.out_dir = g.out_dir;
        req.workers = g.workers;
        const auto r = run_command(req);
        report(r);
        return r.exit_code;
    }
    catch (const ConfigError &e)
    {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    }
}
