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

#include "irsest/pilot_protocol.hpp"

#include <string>
#include <vector>

namespace irsest {

namespace {

void check_channels(const ComplexMatrix &hr, const ComplexMatrix &hp, Index irs_elements) {
    if (hr.cols() != irs_elements || hp.rows() != irs_elements)
        throw DimensionError("channel shapes " + std::to_string(hr.rows()) + "x" +
                             std::to_string(hr.cols()) + " / " + std::to_string(hp.rows()) + "x" +
                             std::to_string(hp.cols()) + " do not match " +
                             std::to_string(irs_elements) + " IRS elements");
}

} // namespace

TrainingSetup make_training_setup(Index blocks, Index pilot_length, Index irs_elements,
                                  Index tx_antennas) {
    if (blocks < 1 || pilot_length < 1 || irs_elements < 1 || tx_antennas < 1)
        throw ParameterError("make_training_setup: all counts must be positive");
    if (blocks > irs_elements)
        throw ParameterError("make_training_setup: B = " + std::to_string(blocks) +
                             " exceeds N_I = " + std::to_string(irs_elements));
    if (pilot_length < tx_antennas)
        throw ParameterError("make_training_setup: T = " + std::to_string(pilot_length) +
                             " is shorter than N_t = " + std::to_string(tx_antennas));
    TrainingSetup setup;
    setup.block_count = blocks;
    setup.pilot_length = pilot_length;
    setup.reflection = dft_matrix(blocks, irs_elements);
    setup.pilots = dft_matrix(tx_antennas, pilot_length);
    return setup;
}

ComplexMatrix composite_channel(const ComplexMatrix &hr, const Eigen::RowVectorXcd &v_b,
                                const ComplexMatrix &hp) {
    if (v_b.size() != hr.cols())
        throw DimensionError("composite_channel: reflection row length mismatch");
    check_channels(hr, hp, v_b.size());
    return hr * v_b.transpose().asDiagonal() * hp;
}

ComplexMatrix simulate_block(const ComplexMatrix &hr, const ComplexMatrix &hp,
                             const ComplexMatrix &hd, const Eigen::RowVectorXcd &v_b,
                             const TrainingSetup &setup, double sigma2, RngStream &rng) {
    if (hp.cols() != setup.tx_antennas() || hd.rows() != hr.rows() || hd.cols() != hp.cols())
        throw DimensionError("simulate_block: channel shapes inconsistent with the setup");
    const ComplexMatrix effective = composite_channel(hr, v_b, hp) + hd;
    return effective * setup.pilots +
           complex_gaussian(hr.rows(), setup.pilot_length, sigma2, rng);
}

ComplexMatrix despread_and_strip(const ComplexMatrix &received, const TrainingSetup &setup,
                                 const ComplexMatrix &hd) {
    if (received.cols() != setup.pilot_length)
        throw DimensionError("despread_and_strip: block has " + std::to_string(received.cols()) +
                             " columns, expected T = " + std::to_string(setup.pilot_length));
    if (hd.rows() != received.rows() || hd.cols() != setup.tx_antennas())
        throw DimensionError("despread_and_strip: direct channel shape mismatch");
    return received * setup.pilots.adjoint() / static_cast<double>(setup.pilot_length) - hd;
}

ObservationStack stack_observations(std::span<const ComplexMatrix> blocks, TrainingSetup setup,
                                    double noise_variance) {
    if (blocks.empty() || static_cast<Index>(blocks.size()) != setup.block_count)
        throw DimensionError("stack_observations: expected " +
                             std::to_string(setup.block_count) + " blocks, got " +
                             std::to_string(blocks.size()));
    const Index rx = blocks.front().rows();
    const Index tx = blocks.front().cols();
    if (tx != setup.tx_antennas())
        throw DimensionError("stack_observations: block width differs from N_t");
    const Index b_count = setup.block_count;

    ObservationStack obs;
    obs.y1.resize(b_count * rx, tx);
    obs.y2.resize(b_count * tx, rx);
    for (Index b = 0; b < b_count; ++b) {
        const ComplexMatrix &y = blocks[static_cast<std::size_t>(b)];
        if (y.rows() != rx || y.cols() != tx)
            throw DimensionError("stack_observations: block " + std::to_string(b) +
                                 " has inconsistent shape");
        obs.y1.middleRows(b * rx, rx) = y;
        obs.y2.middleRows(b * tx, tx) = y.transpose();
    }
    obs.setup = std::move(setup);
    obs.noise_variance = noise_variance;
    return obs;
}

ObservationStack synthesize_observations(const ComplexMatrix &hr, const ComplexMatrix &hp,
                                         const TrainingSetup &setup, double sigma2,
                                         RngStream &rng, ObservationMode mode) {
    check_channels(hr, hp, setup.irs_elements());
    if (hp.cols() != setup.tx_antennas())
        throw DimensionError("synthesize_observations: H_p width differs from N_t");
    if (!(sigma2 >= 0.0))
        throw ParameterError("synthesize_observations: negative noise variance");

    std::vector<ComplexMatrix> blocks;
    blocks.reserve(static_cast<std::size_t>(setup.block_count));
    double effective_variance = sigma2;
    if (mode == ObservationMode::model) {
        for (Index b = 0; b < setup.block_count; ++b)
            blocks.push_back(composite_channel(hr, setup.reflection.row(b), hp) +
                             complex_gaussian(hr.rows(), hp.cols(), sigma2, rng));
    } else {
        // H_d is known and subtracted exactly, so a zero direct channel loses nothing.
        const ComplexMatrix hd = ComplexMatrix::Zero(hr.rows(), hp.cols());
        for (Index b = 0; b < setup.block_count; ++b) {
            const ComplexMatrix r =
                simulate_block(hr, hp, hd, setup.reflection.row(b), setup, sigma2, rng);
            blocks.push_back(despread_and_strip(r, setup, hd));
        }
        effective_variance = sigma2 / static_cast<double>(setup.pilot_length);
    }
    return stack_observations(blocks, setup, effective_variance);
}

} // namespace irsest
