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

#include "irsest/channel_model.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace irsest {

using std::numbers::pi;

ArrayGeometry ArrayGeometry::near_square(Index elements) {
    if (elements < 1)
        throw ParameterError("near_square: element count must be positive");
    Index m = static_cast<Index>(std::sqrt(static_cast<double>(elements)));
    while (m > 1 && elements % m != 0)
        --m;
    return {m, elements / m};
}

void PathSet::validate() const {
    const std::size_t c = gains.size();
    if (aoa_azimuth.size() != c || aoa_elevation.size() != c || aod_azimuth.size() != c ||
        aod_elevation.size() != c)
        throw DimensionError("PathSet: angle lists differ in length from gains");
    const auto in = [](double v, double lo, double hi) { return v >= lo && v <= hi; };
    for (std::size_t i = 0; i < c; ++i) {
        if (!in(aoa_azimuth[i], 0.0, pi) || !in(aod_azimuth[i], 0.0, pi))
            throw ParameterError("PathSet: azimuth outside [0, pi]");
        if (!in(aoa_elevation[i], -pi / 2, pi / 2) || !in(aod_elevation[i], -pi / 2, pi / 2))
            throw ParameterError("PathSet: elevation outside [-pi/2, pi/2]");
    }
}

ComplexMatrix upa_response(const ArrayGeometry &geometry, double azimuth, double elevation) {
    const Index M = geometry.horizontal;
    const Index N = geometry.vertical;
    if (M < 1 || N < 1)
        throw ParameterError("upa_response: empty array geometry");
    const double u = std::sin(azimuth) * std::sin(elevation);
    const double w = std::cos(elevation);
    const double norm = 1.0 / std::sqrt(static_cast<double>(M * N));
    ComplexMatrix a(M * N, 1);
    for (Index m = 0; m < M; ++m)
        for (Index n = 0; n < N; ++n)
            a(m * N + n, 0) = std::polar(norm, pi * (static_cast<double>(n) * u +
                                                     static_cast<double>(m) * w));
    return a;
}

PathSet sample_paths(Index count, RngStream &rng) {
    if (count < 1)
        throw ParameterError("sample_paths: path count must be at least 1");
    PathSet paths;
    for (Index c = 0; c < count; ++c) {
        const double variance = c == 0 ? kLosGainVariance : kNlosGainVariance;
        const double scale = std::sqrt(variance / 2.0);
        const double re = rng.standard_normal();
        const double im = rng.standard_normal();
        paths.gains.emplace_back(scale * re, scale * im);
        paths.aoa_azimuth.push_back(rng.uniform(0.0, pi));
        paths.aoa_elevation.push_back(rng.uniform(-pi / 2, pi / 2));
        paths.aod_azimuth.push_back(rng.uniform(0.0, pi));
        paths.aod_elevation.push_back(rng.uniform(-pi / 2, pi / 2));
    }
    return paths;
}

ComplexMatrix synthesize_channel(const PathSet &paths, const ArrayGeometry &rx,
                                 const ArrayGeometry &tx) {
    paths.validate();
    if (paths.size() == 0)
        throw ParameterError("synthesize_channel: empty path set");
    const double n_rx = static_cast<double>(rx.element_count());
    const double n_tx = static_cast<double>(tx.element_count());
    const double scale = std::sqrt(n_rx * n_tx / static_cast<double>(paths.size()));

    ComplexMatrix h = ComplexMatrix::Zero(rx.element_count(), tx.element_count());
    for (std::size_t c = 0; c < paths.size(); ++c) {
        const ComplexMatrix a_rx = upa_response(rx, paths.aoa_azimuth[c], paths.aoa_elevation[c]);
        const ComplexMatrix a_tx = upa_response(tx, paths.aod_azimuth[c], paths.aod_elevation[c]);
        h.noalias() += (scale * paths.gains[c]) * a_rx * a_tx.adjoint();
    }
    return h;
}

Index numerical_rank(const ComplexMatrix &x, double rel_tol) {
    if (!(rel_tol > 0.0 && rel_tol < 1.0))
        throw ParameterError("numerical_rank: rel_tol must lie in (0, 1)");
    const RealVector s = thin_svd(x).singular_values;
    if (s(0) == 0.0)
        return 0;
    return (s.array() > rel_tol * s(0)).count();
}

} // namespace irsest
