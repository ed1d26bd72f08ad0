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

#ifndef IRSEST_RNG_HPP
#define IRSEST_RNG_HPP

#include <cstdint>
#include <initializer_list>
#include <random>

namespace irsest {

/**
 * Seeded random stream used by every stochastic operation.
 *
 * Streams are not thread-safe; give each worker its own. Independent
 * streams for Monte Carlo trials are obtained with derive(), which hashes
 * a root seed together with a path of stream identifiers so that a trial's
 * randomness never depends on the order in which trials are executed.
 */
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : engine_(seed) {}

    static RngStream derive(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
        std::uint64_t state = splitmix64(seed ^ 0x6a09e667f3bcc909ULL);
        for (std::uint64_t id : path)
            state = splitmix64(state ^ splitmix64(id + 0x9e3779b97f4a7c15ULL));
        return RngStream(state);
    }

    double uniform(double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(engine_);
    }

    double standard_normal() { return normal_(engine_); }

    std::mt19937_64 &engine() { return engine_; }

private:
    static std::uint64_t splitmix64(std::uint64_t x) {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

} // namespace irsest

#endif
