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

#ifndef IRSEST_EXPERIMENT_HPP
#define IRSEST_EXPERIMENT_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "irsest/channel_model.hpp"
#include "irsest/estimators.hpp"

namespace irsest {

enum class Algorithm { mo_est, alt_ls };

std::string_view to_string(Algorithm algorithm);
Algorithm parse_algorithm(std::string_view name);

struct Dimensions {
    Index rx = 16;  // N_r
    Index tx = 36;  // N_t
    Index irs = 64; // N_I
    std::optional<Index> blocks;       // B, defaults to N_I
    std::optional<Index> pilot_length; // T, defaults to N_t

    Index block_count() const { return blocks.value_or(irs); }
    Index pilot_count() const { return pilot_length.value_or(tx); }
};

struct ExperimentConfig {
    Dimensions dims;
    std::vector<Index> paths{3};        // true C; sweeps over C use the whole list
    std::vector<Index> assumed_paths;   // C_hat; empty means C_hat = C
    std::vector<double> snr_db{0.0, 5.0, 10.0};
    Index trials = 100;
    std::vector<Algorithm> algorithms{Algorithm::mo_est, Algorithm::alt_ls};
    std::uint64_t seed = 1;
    ObservationMode mode = ObservationMode::model;
    bool noiseless = false;
    MoEstConfig mo_est;
    AltLsConfig alt_ls;
    Index threads = 1;
    bool record_timing = false; // wall-clock seconds make the CSV non-reproducible

    /// Throws ConfigError naming the first invalid field.
    void validate() const;
};

struct ResultRow {
    Algorithm algorithm = Algorithm::mo_est;
    double snr_db = 0.0; // +inf for noiseless runs
    Index paths = 0;
    Index assumed_paths = 0;
    Index trial = 0;
    double nmse = 0.0;
    double nmse_db = 0.0;
    Index outer_iterations = 0;
    double seconds = 0.0;

    bool operator==(const ResultRow &) const = default;
};

struct SweepPoint {
    double snr_db;
    Index paths;
    Index assumed_paths;
};

/**
 * Runs every (point, trial) pair and returns rows ordered by point, then
 * trial, then the configured algorithm order.
 *
 * Trial t draws its channels from RngStream::derive(seed, {t, 0}), its
 * noise from {t, 1} and each estimator's initialization from {t, 2 + id},
 * so the rows do not depend on thread count or execution order, and every
 * sweep point sees the same channel and noise realizations.
 */
std::vector<ResultRow> run_sweep(const ExperimentConfig &config, std::span<const SweepPoint> points);

/// NMSE versus SNR at C = paths[0], C_hat = assumed_paths[0] (or C).
std::vector<ResultRow> run_snr_sweep(const ExperimentConfig &config);

/// NMSE versus C at snr_db[0] with C_hat = C.
std::vector<ResultRow> run_path_sweep(const ExperimentConfig &config, std::span<const Index> c_list);

/// NMSE versus C_hat at snr_db[0] with channels drawn with C = paths[0].
std::vector<ResultRow> run_mismatch_sweep(const ExperimentConfig &config,
                                          std::span<const Index> c_hat_list);

struct SummaryRow {
    Algorithm algorithm;
    double snr_db;
    Index paths;
    Index assumed_paths;
    Index trials;
    double mean_nmse;       // mean of the linear per-trial NMSE
    double mean_nmse_db;    // 10 log10(mean_nmse)
    double std_error;       // standard error of mean_nmse
};

/// Groups rows by (algorithm, snr, C, C_hat) in first-appearance order.
std::vector<SummaryRow> summarize(std::span<const ResultRow> rows);

// --- CSV -------------------------------------------------------------------

inline constexpr std::string_view kCsvHeader =
    "algorithm,snr_db,C,C_hat,trial,nmse,nmse_db,outer_iters,seconds";

std::string format_csv(std::span<const ResultRow> rows);
std::vector<ResultRow> parse_csv(std::string_view text);
void write_csv(std::span<const ResultRow> rows, const std::filesystem::path &path);
std::vector<ResultRow> read_csv(const std::filesystem::path &path);

// --- configuration -----------------------------------------------------------

/// Applies one key=value setting. Keys match the CLI long flag names
/// (dims, blocks, pilot-len, paths, assumed-paths, snr, trials, algo, seed,
/// mode, restarts, noiseless, threads, timing, epsilon, outer-epsilon,
/// max-iters, outer-max-iters, als-max-iters). Throws ConfigError.
void apply_setting(ExperimentConfig &config, std::string_view key, std::string_view value);

/// Applies the settings of a plain "key = value" file ('#' starts a comment).
void load_config(ExperimentConfig &config, const std::filesystem::path &path);

/// Applies settings from text in the same format.
void load_config_text(ExperimentConfig &config, std::string_view text);

} // namespace irsest

#endif
