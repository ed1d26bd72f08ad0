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

#ifndef IRSEST_ESTIMATORS_HPP
#define IRSEST_ESTIMATORS_HPP

#include <vector>

#include "irsest/cg_mo.hpp"
#include "irsest/pilot_protocol.hpp"

namespace irsest {

struct EstimationReport {
    ComplexMatrix hr_hat; // N_r x N_I
    ComplexMatrix hp_hat; // N_I x N_t
    std::vector<double> outer_objectives;     // f^(0), f^(1), ...
    std::vector<double> half_step_objectives; // after every single-variable update
    std::vector<SolveTrace> inner_traces;     // CG-MO solves, H_p and H_r alternating
    Termination termination_reason = Termination::max_iterations;
    Index restart_index = 0; // which restart produced this report

    Index outer_iterations() const {
        return outer_objectives.empty() ? 0 : static_cast<Index>(outer_objectives.size()) - 1;
    }
    double final_objective() const { return outer_objectives.back(); }
};

struct MoEstConfig {
    CgMoConfig inner;
    double outer_epsilon = 1e-3;
    Index max_outer_iterations = 50;
    Index restarts = 1;
};

struct AltLsConfig {
    double epsilon = 1e-3;
    Index max_iterations = 50;
};

/// ||y1 - (V (.) H_r) H_p||_F^2
double joint_objective(const ObservationStack &obs, const ComplexMatrix &hr,
                       const ComplexMatrix &hp);

/**
 * Alternating fixed-rank estimation of H_r (rank P) and H_p (rank Q).
 *
 * From random unit-norm points on M_P and M_Q, alternately solves the
 * H_p subproblem on y1 and the H_r subproblem on y2 with CG-MO, each warm
 * started at the previous estimate, until the joint objective decreases
 * by at most outer_epsilon. With several restarts the report with the
 * smallest final objective is returned.
 */
EstimationReport mo_est(const ObservationStack &obs, Index P, Index Q, const MoEstConfig &cfg,
                        RngStream &rng);

/// Unconstrained alternating least squares through the pseudo-inverse.
EstimationReport alt_ls(const ObservationStack &obs, const AltLsConfig &cfg, RngStream &rng);

/// ||H_r H_p - Hr_hat Hp_hat||^2 / ||H_r H_p||^2
double nmse_cascaded(const ComplexMatrix &true_hr, const ComplexMatrix &true_hp,
                     const ComplexMatrix &hr_hat, const ComplexMatrix &hp_hat);

} // namespace irsest

#endif
