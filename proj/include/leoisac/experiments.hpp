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

#ifndef LEOISAC_EXPERIMENTS_HPP
#define LEOISAC_EXPERIMENTS_HPP

#include "leoisac/csv.hpp"
#include "leoisac/scenario.hpp"
#include "leoisac/waveform.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

namespace leoisac
{
    // Runs fn(0) .. fn(n - 1) on up to `workers` threads. Each index is independent; callers store results by index
    // so the assembled output does not depend on scheduling. The first exception is rethrown after all threads stop.
    template <class Fn>
    void parallel_for(int n, int workers, Fn &&fn)
    {
        workers = std::max(1, std::min(workers, n));
        if (workers == 1)
        {
            for (int i = 0; i < n; ++i)
                fn(i);
            return;
        }
        std::atomic<int> next{0};
        std::exception_ptr err;
        std::mutex err_mu;
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (int i = next++; i < n; i = next++)
                {
                    try
                    {
                        fn(i);
                    }
                    catch (...)
                    {
                        std::lock_guard<std::mutex> lock(err_mu);
                        if (!err)
                            err = std::current_exception();
                        next = n;
                    }
                }
            });
        for (auto &t : pool)
            t.join();
        if (err)
            std::rethrow_exception(err);
    }

    // Independent stream seed derived from a base seed (splitmix64 finalizer)
    std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

    // CLI exit code of an optimizer status: 0 converged, 3 infeasible, 4 iteration cap
    int exit_code(OptStatus status);

    // Echo path loss against target altitude at the configured target x-y
    struct PathlossRow
    {
        double altitude_km = 0;
        double bistatic_db = 0;
        double monostatic_db = 0;
    };
    std::vector<PathlossRow> pathloss_sweep(const ScenarioConfig &cfg, double alt_min_km, double alt_max_km, int steps);
    CsvTable pathloss_csv(const std::vector<PathlossRow> &rows);

    // Column-major dump of P: column, antenna, re, im
    CsvTable precoder_csv(const PrecoderMatrix &P);

    // One optimizer run of a sweep
    struct SweepTask
    {
        ScenarioConfig cfg;
        int drop = 0;
    };
    struct SweepPoint
    {
        std::string mode;
        double p_t_dbw = 0;
        double crb_threshold_theta = 0;
        double crb_threshold_phi = 0;
        int drop = 0;
        OptStatus status = OptStatus::infeasible;
        double R_min = 0; // 0 for infeasible drops
        int outer_iterations = 0;
        int subproblem_solves = 0;
        double seconds = 0;
    };
    SweepPoint run_sweep_task(const SweepTask &task);
    std::vector<SweepPoint> run_sweep(const std::vector<SweepTask> &tasks, int workers);

    // Tasks ordered mode-major, then power, then drop
    std::vector<SweepTask> minrate_tasks(const ScenarioConfig &base, const std::vector<std::string> &modes,
                                         const std::vector<double> &power_dbw, int drops);

    // Per (mode, power): mean R_min over drops, worst status, mean outer iterations and status counts
    CsvTable minrate_summary_csv(const std::vector<SweepPoint> &points);
    CsvTable minrate_drops_csv(const std::vector<SweepPoint> &points);

    struct BeampatternOutcome
    {
        OptResult opt;
        AngleGrid grid;
        Beampatterns patterns;
        PowerShares shares;
    };
    BeampatternOutcome beampattern_experiment(const Scenario &sc, double step_deg);
    CsvTable beampattern_csv(const BeampatternOutcome &b);
    CsvTable power_ratio_csv(const PowerShares &s);

    // Designed precoder, transmitted frame and echo for a target moved onto the estimation grids
    struct EchoOptions
    {
        double doppler_hz = 5e3;
        bool noise = true;
    };
    struct EchoExperiment
    {
        Scenario sc;
        GridTruth truth;
        OptResult opt;
        CMat X;
        EchoFrame echo;
    };
    // Throws ConfigError if the target delay leaves the window; check opt.status before using the frame
    EchoExperiment prepare_echo(const ScenarioConfig &cfg, const EchoOptions &opt);
    // Redraws frame and noise of a prepared experiment from derive_seed(seed, 1) and derive_seed(seed, 2)
    void synthesize_trial(EchoExperiment &ex, std::uint64_t seed, bool noise);

    struct MusicOutcome
    {
        AngleGrid grid;
        MusicResult music;
        double residual_at_truth = 0;
    };
    MusicOutcome music_experiment(const EchoExperiment &ex);
    // theta_deg, phi_deg, spectrum_db normalized to a 0 dB peak
    CsvTable music_csv(const MusicOutcome &m);

    struct TrackOptions
    {
        double aoa_offset_deg = 0; // added to both estimated angles to emulate a corrupted AOA
        bool use_music = true;     // false: start from the true grid AOA
    };
    struct TrackOutcome
    {
        AnglePair aoa_used;
        EstimationReport report;
        MatchedFilterSetup setup;
        double position_error_m = 0;
        double range_bin_bound_m = 0; // position change of a half-sample bistatic-range error
        bool exact_bins = false;
    };
    TrackOutcome track_experiment(const EchoExperiment &ex, const TrackOptions &opt);
    // tau, bistatic_range_m, doppler_hz, magnitude, valid
    CsvTable track_csv(const TrackOutcome &t);

    nlohmann::json music_report_json(const EchoExperiment &ex, const MusicOutcome &m);
    nlohmann::json track_report_json(const EchoExperiment &ex, const TrackOutcome &t);
}

#endif
