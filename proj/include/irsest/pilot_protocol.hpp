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

#ifndef IRSEST_PILOT_PROTOCOL_HPP
#define IRSEST_PILOT_PROTOCOL_HPP

#include <span>

#include "irsest/matrix_core.hpp"

namespace irsest {

/**
 * B-block training schedule. Row b of `reflection` (B x N_I, unit modulus)
 * is the IRS phase profile during block b; `pilots` (N_t x T) satisfies
 * pilots * pilots^H = T * I.
 */
struct TrainingSetup {
    Index block_count = 0;
    Index pilot_length = 0;
    ComplexMatrix reflection;
    ComplexMatrix pilots;

    Index irs_elements() const { return reflection.cols(); }
    Index tx_antennas() const { return pilots.rows(); }
};

/// V = first B rows of the N_I-point DFT, X = first N_t rows of the T-point DFT.
TrainingSetup make_training_setup(Index blocks, Index pilot_length, Index irs_elements,
                                  Index tx_antennas);

/// H_r diag(v_b) H_p
ComplexMatrix composite_channel(const ComplexMatrix &hr, const Eigen::RowVectorXcd &v_b,
                                const ComplexMatrix &hp);

/// Received block R_b = (H_r diag(v_b) H_p + H_d) X + Z_b, Z_b ~ CN(0, sigma2).
ComplexMatrix simulate_block(const ComplexMatrix &hr, const ComplexMatrix &hp,
                             const ComplexMatrix &hd, const Eigen::RowVectorXcd &v_b,
                             const TrainingSetup &setup, double sigma2, RngStream &rng);

/// (1/T) R_b X^H - H_d. Leaves the composite channel plus CN(0, sigma2/T) noise.
ComplexMatrix despread_and_strip(const ComplexMatrix &received, const TrainingSetup &setup,
                                 const ComplexMatrix &hd);

/**
 * Both stacked regression forms of the observations:
 *   y1 = [Y_1; ...; Y_B]       (B N_r x N_t) = (V (.) H_r) H_p + noise
 *   y2 = [Y_1^T; ...; Y_B^T]   (B N_t x N_r) = (V (.) H_p^T) H_r^T + noise
 */
struct ObservationStack {
    ComplexMatrix y1;
    ComplexMatrix y2;
    TrainingSetup setup;
    double noise_variance = 0.0; // per-entry variance of the stacked noise

    Index block_count() const { return setup.block_count; }
    Index rx_antennas() const { return y1.rows() / setup.block_count; }
    Index tx_antennas() const { return y1.cols(); }
    Index irs_elements() const { return setup.irs_elements(); }
};

ObservationStack stack_observations(std::span<const ComplexMatrix> blocks, TrainingSetup setup,
                                    double noise_variance);

enum class ObservationMode {
    model,      // noise drawn directly on Y_b with variance sigma2
    end_to_end, // simulate_block + despread_and_strip, effective variance sigma2 / T
};

ObservationStack synthesize_observations(const ComplexMatrix &hr, const ComplexMatrix &hp,
                                         const TrainingSetup &setup, double sigma2,
                                         RngStream &rng, ObservationMode mode);

} // namespace irsest

#endif
