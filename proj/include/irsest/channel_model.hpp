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

#ifndef IRSEST_CHANNEL_MODEL_HPP
#define IRSEST_CHANNEL_MODEL_HPP

#include <cmath>
#include <vector>

#include "irsest/matrix_core.hpp"

namespace irsest {

/// Variance of the line-of-sight path gain.
inline constexpr double kLosGainVariance = 1.0;
/// Variance of every non-line-of-sight path gain, 10^(-0.5).
inline const double kNlosGainVariance = std::pow(10.0, -0.5);

/// Half-wavelength spaced uniform planar array with M x N elements.
struct ArrayGeometry {
    Index horizontal = 1; // M
    Index vertical = 1;   // N

    Index element_count() const { return horizontal * vertical; }

    /// M x N grid with M the largest divisor of `elements` not above its square root.
    static ArrayGeometry near_square(Index elements);
};

/// Multipath parameters of one Saleh-Valenzuela channel. Index 0 is the LoS path.
struct PathSet {
    std::vector<Complex> gains;
    std::vector<double> aoa_azimuth;
    std::vector<double> aoa_elevation;
    std::vector<double> aod_azimuth;
    std::vector<double> aod_elevation;

    std::size_t size() const { return gains.size(); }
    void validate() const;
};

/**
 * UPA steering vector, unit norm. Element (m, n) sits at index m*N + n and
 * equals exp(j pi (n sin(az) sin(el) + m cos(el))) / sqrt(MN).
 */
ComplexMatrix upa_response(const ArrayGeometry &geometry, double azimuth, double elevation);

/**
 * Draw `count` paths: LoS gain ~ CN(0,1), the rest ~ CN(0, 10^-0.5);
 * azimuths U[0, pi], elevations U[-pi/2, pi/2].
 */
PathSet sample_paths(Index count, RngStream &rng);

/// sqrt(N_rx N_tx / C) * sum_c gain_c a_rx(aoa_c) a_tx(aod_c)^H
ComplexMatrix synthesize_channel(const PathSet &paths, const ArrayGeometry &rx,
                                 const ArrayGeometry &tx);

/// Number of singular values above rel_tol * sigma_max (0 for the zero matrix).
Index numerical_rank(const ComplexMatrix &x, double rel_tol);

} // namespace irsest

#endif
