// SPDX-License-Identifier: Apache-2.0
//
// irsest: channel estimation for IRS-assisted mmWave MIMO links
// Copyright (C) 2026 The irsest authors
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

#include "irsest/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <string>
#include <thread>

#include "irsest/errors.hpp"

namespace irsest {

namespace {

constexpr std::uint64_t kChannelStream = 0;
constexpr std::uint64_t kNoiseStream = 1;
constexpr std::uint64_t kInitStream = 2;

std::uint64_t algorithm_id(Algorithm a) { return a == Algorithm::mo_est ? 0 : 1; }

double noise_variance(const ExperimentConfig &config, double snr_db) {
    if (config.noiseless)
        return 0.0;
    return std::pow(10.0, -snr_db / 10.0);
}

struct TrialChannels {
    ComplexMatrix hr;
    ComplexMatrix hp;
};

TrialChannels draw_channels(const ExperimentConfig &config, Index paths, Index trial) {
    const Dimensions &d = config.dims;
    RngStream rng = RngStream::derive(config.seed, {static_cast<std::uint64_t>(trial), kChannelStream});
    const ArrayGeometry ue = ArrayGeometry::near_square(d.rx);
    const ArrayGeometry irs = ArrayGeometry::near_square(d.irs);
    const ArrayGeometry bs = ArrayGeometry::near_square(d.tx);
    // H_r maps IRS -> receiver, H_p maps transmitter -> IRS
    const PathSet r_paths = sample_paths(paths, rng);
    const PathSet p_paths = sample_paths(paths, rng);
    return {synthesize_channel(r_paths, ue, irs), synthesize_channel(p_paths, irs, bs)};
}

std::vector<ResultRow> run_point_trial(const ExperimentConfig &config, const TrainingSetup &setup,
                                       const SweepPoint &point, Index trial) {
    const TrialChannels ch = draw_channels(config, point.paths, trial);
    RngStream noise = RngStream::derive(config.seed, {static_cast<std::uint64_t>(trial), kNoiseStream});
    const ObservationStack obs = synthesize_observations(
        ch.hr, ch.hp, setup, noise_variance(config, point.snr_db), noise, config.mode);

    std::vector<ResultRow> rows;
    rows.reserve(config.algorithms.size());
    for (Algorithm algo : config.algorithms) {
        RngStream init = RngStream::derive(
            config.seed, {static_cast<std::uint64_t>(trial), kInitStream + algorithm_id(algo)});
        const auto start = std::chrono::steady_clock::now();
        const EstimationReport report =
            algo == Algorithm::mo_est
                ? mo_est(obs, point.assumed_paths, point.assumed_paths, config.mo_est, init)
                : alt_ls(obs, config.alt_ls, init);
        const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;

        ResultRow row;
        row.algorithm = algo;
        row.snr_db = config.noiseless ? std::numeric_limits<double>::infinity() : point.snr_db;
        row.paths = point.paths;
        row.assumed_paths = point.assumed_paths;
        row.trial = trial;
        row.nmse = nmse_cascaded(ch.hr, ch.hp, report.hr_hat, report.hp_hat);
        row.nmse_db = 10.0 * std::log10(row.nmse);
        row.outer_iterations = report.outer_iterations();
        row.seconds = config.record_timing ? elapsed.count() : 0.0;
        rows.push_back(row);
    }
    return rows;
}

Index first_assumed(const ExperimentConfig &config, Index c) {
    return config.assumed_paths.empty() ? c : config.assumed_paths.front();
}

} // namespace

std::string_view to_string(Algorithm algorithm) {
    return algorithm == Algorithm::mo_est ? "mo-est" : "alt-ls";
}

Algorithm parse_algorithm(std::string_view name) {
    if (name == "mo-est" || name == "mo_est")
        return Algorithm::mo_est;
    if (name == "alt-ls" || name == "alt_ls")
        return Algorithm::alt_ls;
    throw ConfigError("algo", "unknown algorithm '" + std::string(name) + "'");
}

void ExperimentConfig::validate() const {
    const Dimensions &d = dims;
    if (d.rx < 1 || d.tx < 1 || d.irs < 1)
        throw ConfigError("dims", "antenna counts must be positive");
    if (d.block_count() < 1 || d.block_count() > d.irs)
        throw ConfigError("blocks", "block count must lie in [1, N_I] = [1, " +
                                        std::to_string(d.irs) + "]");
    if (d.pilot_count() < d.tx)
        throw ConfigError("pilot-len", "pilot length must be at least N_t = " + std::to_string(d.tx));
    if (paths.empty())
        throw ConfigError("paths", "at least one path count is required");
    for (Index c : paths)
        if (c < 1)
            throw ConfigError("paths", "path counts must be positive");
    const Index rank_cap = std::min({d.rx, d.irs, d.tx});
    for (Index c : assumed_paths)
        if (c < 1 || c > rank_cap)
            throw ConfigError("assumed-paths", "assumed path count must lie in [1, " +
                                                   std::to_string(rank_cap) + "]");
    if (snr_db.empty() && !noiseless)
        throw ConfigError("snr", "at least one SNR point is required");
    for (double s : snr_db)
        if (!std::isfinite(s))
            throw ConfigError("snr", "SNR values must be finite");
    if (trials < 1)
        throw ConfigError("trials", "trial count must be positive");
    if (algorithms.empty())
        throw ConfigError("algo", "at least one algorithm is required");
    if (mo_est.restarts < 1)
        throw ConfigError("restarts", "restart count must be positive");
    if (!(mo_est.inner.epsilon > 0.0))
        throw ConfigError("epsilon", "inner threshold must be positive");
    if (mo_est.inner.max_iterations < 1)
        throw ConfigError("max-iters", "inner iteration cap must be positive");
    if (!(mo_est.outer_epsilon > 0.0))
        throw ConfigError("outer-epsilon", "outer threshold must be positive");
    if (mo_est.max_outer_iterations < 1)
        throw ConfigError("outer-max-iters", "outer iteration cap must be positive");
    if (!(alt_ls.epsilon > 0.0))
        throw ConfigError("outer-epsilon", "threshold must be positive");
    if (alt_ls.max_iterations < 1)
        throw ConfigError("als-max-iters", "iteration cap must be positive");
    if (threads < 1)
        throw ConfigError("threads", "thread count must be positive");
}

std::vector<ResultRow> run_sweep(const ExperimentConfig &config, std::span<const SweepPoint> points) {
    config.validate();
    const Dimensions &d = config.dims;
    const Index rank_cap = std::min({d.rx, d.irs, d.tx});
    for (const SweepPoint &p : points) {
        if (p.paths < 1)
            throw ConfigError("paths", "path counts must be positive");
        if (p.assumed_paths < 1 || p.assumed_paths > rank_cap)
            throw ConfigError("assumed-paths", "assumed path count " + std::to_string(p.assumed_paths) +
                                                   " outside [1, " + std::to_string(rank_cap) + "]");
    }
    const TrainingSetup setup =
        make_training_setup(d.block_count(), d.pilot_count(), d.irs, d.tx);

    const std::size_t per_point = static_cast<std::size_t>(config.trials);
    const std::size_t total = points.size() * per_point;
    std::vector<std::vector<ResultRow>> slots(total);

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&]() {
        for (;;) {
            const std::size_t job = next.fetch_add(1);
            if (job >= total)
                return;
            try {
                slots[job] = run_point_trial(config, setup, points[job / per_point],
                                             static_cast<Index>(job % per_point));
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure)
                    failure = std::current_exception();
                next.store(total);
                return;
            }
        }
    };

    const std::size_t n_threads =
        std::min<std::size_t>(static_cast<std::size_t>(config.threads), std::max<std::size_t>(total, 1));
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (std::size_t i = 0; i < n_threads; ++i)
            pool.emplace_back(worker);
        for (std::thread &t : pool)
            t.join();
    }
    if (failure)
        std::rethrow_exception(failure);

    std::vector<ResultRow> rows;
    rows.reserve(total * config.algorithms.size());
    for (auto &slot : slots)
        rows.insert(rows.end(), slot.begin(), slot.end());
    return rows;
}

std::vector<ResultRow> run_snr_sweep(const ExperimentConfig &config) {
    config.validate();
    const Index c = config.paths.front();
    const Index c_hat = first_assumed(config, c);
    std::vector<SweepPoint> points;
    if (config.noiseless) {
        points.push_back({std::numeric_limits<double>::infinity(), c, c_hat});
    } else {
        for (double s : config.snr_db)
            points.push_back({s, c, c_hat});
    }
    return run_sweep(config, points);
}

std::vector<ResultRow> run_path_sweep(const ExperimentConfig &config, std::span<const Index> c_list) {
    config.validate();
    const double snr = config.snr_db.empty() ? 0.0 : config.snr_db.front();
    std::vector<SweepPoint> points;
    for (Index c : c_list)
        points.push_back({snr, c, c});
    return run_sweep(config, points);
}

std::vector<ResultRow> run_mismatch_sweep(const ExperimentConfig &config,
                                          std::span<const Index> c_hat_list) {
    config.validate();
    const double snr = config.snr_db.empty() ? 0.0 : config.snr_db.front();
    const Index c = config.paths.front();
    std::vector<SweepPoint> points;
    for (Index c_hat : c_hat_list)
        points.push_back({snr, c, c_hat});
    return run_sweep(config, points);
}

std::vector<SummaryRow> summarize(std::span<const ResultRow> rows) {
    struct Acc {
        SummaryRow key;
        double sum = 0.0;
        double sum_sq = 0.0;
    };
    std::vector<Acc> groups;
    for (const ResultRow &r : rows) {
        auto it = std::find_if(groups.begin(), groups.end(), [&](const Acc &g) {
            return g.key.algorithm == r.algorithm && g.key.snr_db == r.snr_db &&
                   g.key.paths == r.paths && g.key.assumed_paths == r.assumed_paths;
        });
        if (it == groups.end()) {
            groups.push_back({{r.algorithm, r.snr_db, r.paths, r.assumed_paths, 0, 0.0, 0.0, 0.0}});
            it = std::prev(groups.end());
        }
        it->key.trials += 1;
        it->sum += r.nmse;
        it->sum_sq += r.nmse * r.nmse;
    }
    std::vector<SummaryRow> out;
    out.reserve(groups.size());
    for (Acc &g : groups) {
        const double n = static_cast<double>(g.key.trials);
        const double mean = g.sum / n;
        double var = 0.0;
        if (g.key.trials > 1)
            var = std::max(0.0, (g.sum_sq - n * mean * mean) / (n - 1.0));
        g.key.mean_nmse = mean;
        g.key.mean_nmse_db = 10.0 * std::log10(mean);
        g.key.std_error = std::sqrt(var / n);
        out.push_back(g.key);
    }
    return out;
}

} // namespace irsest
