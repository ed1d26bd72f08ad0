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

// Monte Carlo driver: NMSE versus SNR, path count, or assumed path count.
//
//   irsest_sim snr-sweep --trials 100 --snr 0,5,10 --out snr.csv
//   irsest_sim path-sweep --paths 1,2,3,4,5 --snr 5
//   irsest_sim mismatch-sweep --paths 3 --assumed-paths 2,3,4,5

#include <cstdio>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "irsest/errors.hpp"
#include "irsest/experiment.hpp"

namespace {

using irsest::ExperimentConfig;

// Flags are collected as raw strings and applied after the config file so
// that the command line always wins, whatever the order on the line.
struct FlagValues {
    std::string config_path;
    std::string out_path;
    std::vector<std::pair<std::string, std::string>> settings;
};

void add_setting_flag(CLI::App &app, FlagValues &flags, const std::string &name,
                      const std::string &help) {
    app.add_option_function<std::string>(
        "--" + name, [&flags, name](const std::string &v) { flags.settings.emplace_back(name, v); },
        help);
}

void add_switch(CLI::App &app, FlagValues &flags, const std::string &name, const std::string &help) {
    app.add_flag_callback(
        "--" + name, [&flags, name]() { flags.settings.emplace_back(name, "true"); }, help);
}

void print_summary(const std::vector<irsest::ResultRow> &rows) {
    std::fprintf(stderr, "%-7s %8s %3s %5s %6s %12s %10s\n", "algo", "snr_db", "C", "C_hat",
                 "trials", "nmse_db", "stderr");
    for (const irsest::SummaryRow &s : irsest::summarize(rows)) {
        std::fprintf(stderr, "%-7s %8.2f %3ld %5ld %6ld %12.3f %10.3g\n",
                     std::string(irsest::to_string(s.algorithm)).c_str(), s.snr_db,
                     static_cast<long>(s.paths), static_cast<long>(s.assumed_paths),
                     static_cast<long>(s.trials), s.mean_nmse_db, s.std_error);
    }
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"IRS cascaded channel estimation: Monte Carlo sweeps"};
    app.require_subcommand(1);

    FlagValues flags;
    std::vector<CLI::App *> subs{
        app.add_subcommand("snr-sweep", "NMSE versus SNR at fixed C"),
        app.add_subcommand("path-sweep", "NMSE versus C (--paths list) at the first SNR"),
        app.add_subcommand("mismatch-sweep",
                           "NMSE versus assumed C (--assumed-paths list) at the first SNR"),
    };
    for (CLI::App *sub : subs) {
        sub->add_option("--config", flags.config_path, "key = value settings file");
        sub->add_option("--out", flags.out_path, "CSV output path (default: stdout)");
        add_setting_flag(*sub, flags, "seed", "root seed");
        add_setting_flag(*sub, flags, "trials", "Monte Carlo trials per point");
        add_setting_flag(*sub, flags, "snr", "comma list of SNR values in dB");
        add_setting_flag(*sub, flags, "dims", "NrxNtxNi, e.g. 16x36x64");
        add_setting_flag(*sub, flags, "blocks", "training blocks B (default N_I)");
        add_setting_flag(*sub, flags, "pilot-len", "pilot length T (default N_t)");
        add_setting_flag(*sub, flags, "paths", "comma list of true path counts C");
        add_setting_flag(*sub, flags, "assumed-paths", "comma list of assumed path counts");
        add_setting_flag(*sub, flags, "algo", "comma list of mo-est, alt-ls");
        add_setting_flag(*sub, flags, "restarts", "MO-EST random restarts");
        add_setting_flag(*sub, flags, "mode", "model | e2e");
        add_setting_flag(*sub, flags, "threads", "worker threads");
        add_setting_flag(*sub, flags, "epsilon", "CG-MO decrease threshold");
        add_setting_flag(*sub, flags, "outer-epsilon", "outer-loop decrease threshold");
        add_setting_flag(*sub, flags, "max-iters", "CG-MO iteration cap");
        add_setting_flag(*sub, flags, "outer-max-iters", "MO-EST outer iteration cap");
        add_setting_flag(*sub, flags, "als-max-iters", "ALT-LS iteration cap");
        add_switch(*sub, flags, "noiseless", "sigma^2 = 0");
        add_switch(*sub, flags, "timing", "record wall-clock seconds (breaks byte-identical output)");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    ExperimentConfig config;
    std::vector<irsest::ResultRow> rows;
    try {
        if (!flags.config_path.empty())
            irsest::load_config(config, flags.config_path);
        for (const auto &[key, value] : flags.settings)
            irsest::apply_setting(config, key, value);
        config.validate();

        const std::string name = app.get_subcommands().front()->get_name();
        if (name == "snr-sweep") {
            rows = irsest::run_snr_sweep(config);
        } else if (name == "path-sweep") {
            rows = irsest::run_path_sweep(config, config.paths);
        } else {
            if (config.assumed_paths.empty())
                throw irsest::ConfigError("assumed-paths", "mismatch-sweep needs a list");
            rows = irsest::run_mismatch_sweep(config, config.assumed_paths);
        }
    } catch (const irsest::ConfigError &e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const irsest::IoError &e) {
        // an unreadable --config file is a configuration problem
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }

    try {
        if (flags.out_path.empty())
            std::cout << irsest::format_csv(rows);
        else
            irsest::write_csv(rows, flags.out_path);
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    print_summary(rows);
    return 0;
}
