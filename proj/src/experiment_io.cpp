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

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <system_error>

#include "irsest/errors.hpp"
#include "irsest/experiment.hpp"

namespace irsest {

namespace {

std::string_view trim(std::string_view s) {
    const auto ws = " \t\r\n";
    const std::size_t b = s.find_first_not_of(ws);
    if (b == std::string_view::npos)
        return {};
    const std::size_t e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t pos = s.find(sep, start);
        out.push_back(s.substr(start, pos == std::string_view::npos ? pos : pos - start));
        if (pos == std::string_view::npos)
            return out;
        start = pos + 1;
    }
}

void append_double(std::string &out, double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    out.append(buf, res.ptr);
}

template <class T>
bool parse_number(std::string_view s, T &value) {
    s = trim(s);
    if (s.empty())
        return false;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), value);
    return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

Index setting_count(std::string_view key, std::string_view value) {
    Index n = 0;
    if (!parse_number(value, n))
        throw ConfigError(std::string(key), "expected an integer, got '" + std::string(value) + "'");
    return n;
}

double setting_real(std::string_view key, std::string_view value) {
    double x = 0.0;
    if (!parse_number(value, x))
        throw ConfigError(std::string(key), "expected a number, got '" + std::string(value) + "'");
    return x;
}

bool setting_bool(std::string_view key, std::string_view value) {
    value = trim(value);
    if (value == "1" || value == "true" || value == "yes" || value == "on")
        return true;
    if (value == "0" || value == "false" || value == "no" || value == "off")
        return false;
    throw ConfigError(std::string(key), "expected a boolean, got '" + std::string(value) + "'");
}

template <class F>
auto setting_list(std::string_view key, std::string_view value, F parse_one) {
    std::vector<decltype(parse_one(key, value))> out;
    if (trim(value).empty())
        return out;
    for (std::string_view item : split(value, ','))
        out.push_back(parse_one(key, trim(item)));
    return out;
}

} // namespace

// --- CSV -------------------------------------------------------------------

std::string format_csv(std::span<const ResultRow> rows) {
    std::string out(kCsvHeader);
    out.push_back('\n');
    for (const ResultRow &r : rows) {
        out.append(to_string(r.algorithm));
        out.push_back(',');
        append_double(out, r.snr_db);
        out.push_back(',');
        out.append(std::to_string(r.paths));
        out.push_back(',');
        out.append(std::to_string(r.assumed_paths));
        out.push_back(',');
        out.append(std::to_string(r.trial));
        out.push_back(',');
        append_double(out, r.nmse);
        out.push_back(',');
        append_double(out, r.nmse_db);
        out.push_back(',');
        out.append(std::to_string(r.outer_iterations));
        out.push_back(',');
        append_double(out, r.seconds);
        out.push_back('\n');
    }
    return out;
}

std::vector<ResultRow> parse_csv(std::string_view text) {
    std::vector<ResultRow> rows;
    Index line_no = 0;
    bool header_seen = false;
    while (!text.empty()) {
        const std::size_t nl = text.find('\n');
        std::string_view line = trim(text.substr(0, nl));
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (line.empty())
            continue;
        if (!header_seen) {
            if (line != kCsvHeader)
                throw IoError("CSV line 1: unexpected header '" + std::string(line) + "'");
            header_seen = true;
            continue;
        }
        const auto f = split(line, ',');
        const auto bad = [&](const char *what) {
            return IoError("CSV line " + std::to_string(line_no) + ": " + what);
        };
        if (f.size() != 9)
            throw bad("expected 9 fields");
        ResultRow r;
        try {
            r.algorithm = parse_algorithm(f[0]);
        } catch (const ConfigError &) {
            throw bad("unknown algorithm");
        }
        if (!parse_number(f[1], r.snr_db) || !parse_number(f[2], r.paths) ||
            !parse_number(f[3], r.assumed_paths) || !parse_number(f[4], r.trial) ||
            !parse_number(f[5], r.nmse) || !parse_number(f[6], r.nmse_db) ||
            !parse_number(f[7], r.outer_iterations) || !parse_number(f[8], r.seconds))
            throw bad("malformed number");
        rows.push_back(r);
    }
    if (!header_seen)
        throw IoError("CSV: missing header");
    return rows;
}

void write_csv(std::span<const ResultRow> rows, const std::filesystem::path &path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot open '" + path.string() + "' for writing");
    const std::string text = format_csv(rows);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    out.close();
    if (!out)
        throw IoError("write to '" + path.string() + "' failed");
}

std::vector<ResultRow> read_csv(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open '" + path.string() + "' for reading");
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_csv(buf.str());
    } catch (const IoError &e) {
        throw IoError(path.string() + ": " + e.what());
    }
}

// --- configuration -----------------------------------------------------------

void apply_setting(ExperimentConfig &config, std::string_view key, std::string_view value) {
    key = trim(key);
    value = trim(value);
    const std::string k(key);
    if (key == "dims") {
        const auto parts = split(value, 'x');
        if (parts.size() != 3)
            throw ConfigError(k, "expected NrxNtxNi, got '" + std::string(value) + "'");
        config.dims.rx = setting_count(key, parts[0]);
        config.dims.tx = setting_count(key, parts[1]);
        config.dims.irs = setting_count(key, parts[2]);
    } else if (key == "blocks") {
        config.dims.blocks = setting_count(key, value);
    } else if (key == "pilot-len") {
        config.dims.pilot_length = setting_count(key, value);
    } else if (key == "paths") {
        config.paths = setting_list(key, value, setting_count);
    } else if (key == "assumed-paths") {
        config.assumed_paths = setting_list(key, value, setting_count);
    } else if (key == "snr") {
        config.snr_db = setting_list(key, value, setting_real);
    } else if (key == "trials") {
        config.trials = setting_count(key, value);
    } else if (key == "algo") {
        config.algorithms = setting_list(key, value, [](std::string_view, std::string_view v) {
            return parse_algorithm(v);
        });
    } else if (key == "seed") {
        std::uint64_t s = 0;
        if (!parse_number(value, s))
            throw ConfigError(k, "expected an unsigned integer, got '" + std::string(value) + "'");
        config.seed = s;
    } else if (key == "mode") {
        if (value == "model")
            config.mode = ObservationMode::model;
        else if (value == "e2e")
            config.mode = ObservationMode::end_to_end;
        else
            throw ConfigError(k, "expected 'model' or 'e2e', got '" + std::string(value) + "'");
    } else if (key == "restarts") {
        config.mo_est.restarts = setting_count(key, value);
    } else if (key == "noiseless") {
        config.noiseless = setting_bool(key, value);
    } else if (key == "threads") {
        config.threads = setting_count(key, value);
    } else if (key == "timing") {
        config.record_timing = setting_bool(key, value);
    } else if (key == "epsilon") {
        config.mo_est.inner.epsilon = setting_real(key, value);
    } else if (key == "outer-epsilon") {
        config.mo_est.outer_epsilon = setting_real(key, value);
        config.alt_ls.epsilon = config.mo_est.outer_epsilon;
    } else if (key == "max-iters") {
        config.mo_est.inner.max_iterations = setting_count(key, value);
    } else if (key == "outer-max-iters") {
        config.mo_est.max_outer_iterations = setting_count(key, value);
    } else if (key == "als-max-iters") {
        config.alt_ls.max_iterations = setting_count(key, value);
    } else {
        throw ConfigError(k, "unknown setting");
    }
}

void load_config_text(ExperimentConfig &config, std::string_view text) {
    Index line_no = 0;
    while (!text.empty()) {
        const std::size_t nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (const std::size_t hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("line " + std::to_string(line_no), "expected key = value");
        apply_setting(config, line.substr(0, eq), line.substr(eq + 1));
    }
}

void load_config(ExperimentConfig &config, const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open config '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    load_config_text(config, buf.str());
}

} // namespace irsest
