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

#include <fmt/format.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace leoisac
{
    using nlohmann::json;
    namespace fs = std::filesystem;

    namespace
    {
        using Clock = std::chrono::steady_clock;

        // Default arguments per command; user keys must be a subset
        json defaults_for(const std::string &command, const ScenarioConfig &cfg)
        {
            if (command == "pathloss")
                return {{"alt_min_km", 1.0}, {"alt_max_km", 50.0}, {"steps", 50}};
            if (command == "optimize")
                return json::object();
            if (command == "minrate-sweep")
            {
                json modes = json::array();
                for (const auto &m : ModeConfig::all_modes())
                    modes.push_back(m.name());
                return {{"power_list_dbw", cfg.power_list_dbw}, {"modes", modes}, {"drops", cfg.monte_carlo_drops}};
            }
            if (command == "beampattern")
                return {{"step_deg", 1.0}};
            if (command == "music")
                return {{"doppler_hz", 5e3}, {"noise", true}};
            if (command == "track")
                return {{"doppler_hz", 5e3}, {"noise", true}, {"aoa_offset_deg", 0.0}, {"use_music", true}};
            throw ConfigError("unknown command '" + command + "'");
        }

        json complete_args(const std::string &command, const json &given, const ScenarioConfig &cfg)
        {
            json args = defaults_for(command, cfg);
            if (!given.is_object())
                throw ConfigError("command arguments must be an object");
            for (auto it = given.begin(); it != given.end(); ++it)
            {
                if (!args.contains(it.key()))
                    throw ConfigError(fmt::format("unknown argument '{}' for {}", it.key(), command));
                args[it.key()] = it.value();
            }
            return args;
        }

        struct Run
        {
            const CommandRequest &req;
            RunManifest &m;
            Clock::time_point t = Clock::now();

            void stage(const std::string &name)
            {
                const auto now = Clock::now();
                m.timings.push_back({name, std::chrono::duration<double>(now - t).count()});
                t = now;
            }

            void write(const CsvTable &table, const std::string &file)
            {
                const fs::path p = fs::path(req.out_dir) / file;
                table.write(p.string());
                m.outputs.push_back({file, file_sha256(p.string())});
            }

            void write_json(const json &j, const std::string &file)
            {
                const fs::path p = fs::path(req.out_dir) / file;
                std::ofstream f(p, std::ios::binary | std::ios::trunc);
                if (!f)
                    throw std::runtime_error("cannot write '" + p.string() + "'");
                f << j.dump(2) << '\n';
                f.close();
                m.outputs.push_back({file, file_sha256(p.string())});
            }
        };

        json opt_summary(const OptResult &r)
        {
            json ratios = json::array();
            for (Eigen::Index i = 0; i < r.eigen_ratio.size(); ++i)
                ratios.push_back(r.eigen_ratio(i));
            return {{"status", to_string(r.status)},
                    {"R_min_bps_per_hz", r.R_min},
                    {"R_min_lifted_bps_per_hz", r.R_min_lifted},
                    {"outer_iterations", r.outer_iterations},
                    {"subproblem_solves", r.subproblem_solves},
                    {"eigen_ratio", ratios},
                    {"total_power_w", r.P.total_power()}};
        }

        CsvTable trace_csv(const OptResult &r)
        {
            CsvTable t({"outer", "inner", "R_min_lifted_bps_per_hz"});
            for (std::size_t o = 0; o < r.inner_trace.size(); ++o)
                for (std::size_t i = 0; i < r.inner_trace[o].size(); ++i)
                    t.row({cell(int(o + 1)), cell(int(i + 1)), cell(r.inner_trace[o][i])});
            return t;
        }

        int cmd_pathloss(Run &run, const json &a)
        {
            const auto rows = pathloss_sweep(run.req.cfg, a.at("alt_min_km").get<double>(),
                                             a.at("alt_max_km").get<double>(), a.at("steps").get<int>());
            run.stage("pathloss");
            run.write(pathloss_csv(rows), "pathloss.csv");
            return kExitOk;
        }

        int cmd_optimize(Run &run, const json &)
        {
            const Scenario sc = build_scenario(run.req.cfg);
            const OptResult r = solve(sc.opt, sc.opt_config());
            run.stage("optimize");
            run.m.summary = opt_summary(r);
            if (r.status != OptStatus::infeasible)
            {
                run.write(precoder_csv(r.P), "precoder.csv");
                run.write(trace_csv(r), "optimize_trace.csv");
            }
            return exit_code(r.status);
        }

        int cmd_minrate(Run &run, const json &a)
        {
            const auto modes = a.at("modes").get<std::vector<std::string>>();
            for (const auto &m : modes)
                try
                {
                    ModeConfig::parse(m);
                }
                catch (const std::exception &e)
                {
                    throw ConfigError(e.what());
                }
            const auto tasks = minrate_tasks(run.req.cfg, modes, a.at("power_list_dbw").get<std::vector<double>>(),
                                             a.at("drops").get<int>());
            const auto points = run_sweep(tasks, run.req.workers);
            run.stage("sweep");
            run.write(minrate_summary_csv(points), "minrate.csv");
            run.write(minrate_drops_csv(points), "minrate_drops.csv");
            run.m.summary = {{"tasks", int(points.size())}};
            return kExitOk;
        }

        int cmd_beampattern(Run &run, const json &a)
        {
            const Scenario sc = build_scenario(run.req.cfg);
            const auto b = beampattern_experiment(sc, a.at("step_deg").get<double>());
            run.stage("optimize+patterns");
            run.m.summary = opt_summary(b.opt);
            if (b.opt.status == OptStatus::infeasible)
                return kExitInfeasible;
            run.write(beampattern_csv(b), "beampattern.csv");
            run.write(power_ratio_csv(b.shares), "power_ratio.csv");
            return exit_code(b.opt.status);
        }

        EchoExperiment echo_for(Run &run, const json &a)
        {
            EchoOptions eo;
            eo.doppler_hz = a.at("doppler_hz").get<double>();
            eo.noise = a.at("noise").get<bool>();
            auto ex = prepare_echo(run.req.cfg, eo);
            run.stage("optimize+echo");
            return ex;
        }

        int cmd_music(Run &run, const json &a)
        {
            const auto ex = echo_for(run, a);
            if (ex.opt.status == OptStatus::infeasible)
            {
                run.m.summary = opt_summary(ex.opt);
                return kExitInfeasible;
            }
            const auto mu = music_experiment(ex);
            run.stage("music");
            run.write(music_csv(mu), "music.csv");
            const json rep = music_report_json(ex, mu);
            run.write_json(rep, "music_report.json");
            run.m.summary = rep;
            return exit_code(ex.opt.status);
        }

        int cmd_track(Run &run, const json &a)
        {
            const auto ex = echo_for(run, a);
            if (ex.opt.status == OptStatus::infeasible)
            {
                run.m.summary = opt_summary(ex.opt);
                return kExitInfeasible;
            }
            TrackOptions to;
            to.aoa_offset_deg = a.at("aoa_offset_deg").get<double>();
            to.use_music = a.at("use_music").get<bool>();
            const auto tr = track_experiment(ex, to);
            run.stage("track");
            run.write(track_csv(tr), "track.csv");
            const json rep = track_report_json(ex, tr);
            run.write_json(rep, "track_report.json");
            run.m.summary = rep;
            return exit_code(ex.opt.status);
        }
    }

    const std::vector<std::string> &command_names()
    {
        static const std::vector<std::string> names = {"pathloss", "optimize", "minrate-sweep",
                                                       "beampattern", "music", "track"};
        return names;
    }

    CommandResult run_command(const CommandRequest &req)
    {
        req.cfg.validate();
        CommandResult res;
        RunManifest &m = res.manifest;
        m.command = req.command;
        try
        {
            m.args = complete_args(req.command, req.args, req.cfg);
        }
        catch (const json::exception &e)
        {
            throw ConfigError(e.what());
        }
        m.config = req.cfg.to_json();
        m.config_hash = req.cfg.hash();
        m.seeds = {{"seed", req.cfg.seed},
                   {"users_seed", req.cfg.users.seed},
                   {"frame_seed", derive_seed(req.cfg.seed, 1)},
                   {"noise_seed", derive_seed(req.cfg.seed, 2)}};
        if (req.command == "minrate-sweep")
            m.seeds["drops"] = m.args.at("drops");

        std::error_code ec;
        fs::create_directories(req.out_dir, ec);
        if (ec)
            throw std::runtime_error("cannot create output directory '" + req.out_dir + "': " + ec.message());

        static const std::map<std::string, std::function<int(Run &, const json &)>> table = {
            {"pathloss", cmd_pathloss}, {"optimize", cmd_optimize}, {"minrate-sweep", cmd_minrate},
            {"beampattern", cmd_beampattern}, {"music", cmd_music}, {"track", cmd_track}};
        Run run{req, m};
        try
        {
            res.exit_code = table.at(req.command)(run, m.args);
        }
        catch (const json::exception &e)
        {
            throw ConfigError(std::string("bad argument value: ") + e.what());
        }
        res.manifest_path = (fs::path(req.out_dir) / (req.command + "_manifest.json")).string();
        m.write(res.manifest_path);
        return res;
    }

    CommandResult replay_manifest(const RunManifest &m, const std::string &out_dir, int workers)
    {
        CommandRequest req;
        req.command = m.command;
        req.args = m.args;
        req.cfg = ScenarioConfig::from_json(m.config);
        if (req.cfg.hash() != m.config_hash)
            throw ConfigError("manifest config does not match its recorded hash");
        req.out_dir = out_dir;
        req.workers = workers;
        return run_command(req);
    }

    ScenarioConfig load_config_or_manifest(const std::string &path, const std::string &profile_override)
    {
        std::ifstream in(path);
        if (!in)
            throw ConfigError("cannot open config file '" + path + "'");
        json j;
        try
        {
            j = json::parse(in);
        }
        catch (const json::exception &e)
        {
            throw ConfigError(std::string("config parse error: ") + e.what());
        }
        if (RunManifest::looks_like_manifest(j))
            j = j.at("config");
        if (!profile_override.empty() && j.is_object() && !j.contains("profile"))
            j["profile"] = profile_override;
        return ScenarioConfig::from_json(j);
    }
}
