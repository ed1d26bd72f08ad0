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

#include "irsest/estimators.hpp"

#include <string>

namespace irsest {

namespace {

void validate_stack(const ObservationStack &obs) {
    if (obs.setup.block_count < 1 || obs.y1.rows() != obs.setup.block_count * obs.rx_antennas() ||
        obs.y2.rows() != obs.setup.block_count * obs.tx_antennas() ||
        obs.y2.cols() != obs.rx_antennas() || obs.setup.reflection.rows() != obs.block_count())
        throw DimensionError("observation stack is internally inconsistent");
}

EstimationReport mo_est_single(const ObservationStack &obs, Index P, Index Q,
                               const MoEstConfig &cfg, RngStream &rng) {
    const ComplexMatrix &v = obs.setup.reflection;
    const Index nr = obs.rx_antennas();
    const Index nt = obs.tx_antennas();
    const Index ni = obs.irs_elements();

    FixedRankPoint hr = random_point(nr, ni, P, rng);
    FixedRankPoint hp = random_point(ni, nt, Q, rng);

    EstimationReport report;
    double f = joint_objective(obs, hr.dense(), hp.dense());
    report.outer_objectives.push_back(f);
    report.termination_reason = Termination::max_iterations;

    for (Index k = 1; k <= cfg.max_outer_iterations; ++k) {
        // Row blocks of V (.) H_r live in span(U_r); blocks of V (.) H_p^T in span(conj(V_p)).
        const LeastSquaresProblem hp_problem(khatri_rao(v, hr.dense()), obs.y1, false, hr.left());
        SolveResult hp_solve = cg_mo_solve(hp_problem, hp, cfg.inner);
        const ComplexMatrix hp_dense = hp_solve.point.dense();
        const double f_half = joint_objective(obs, hr.dense(), hp_dense);

        const LeastSquaresProblem hr_problem(khatri_rao(v, hp_dense.transpose()), obs.y2, true,
                                             hp_solve.point.right().conjugate());
        SolveResult hr_solve = cg_mo_solve(hr_problem, hr, cfg.inner);
        const double f_next = joint_objective(obs, hr_solve.point.dense(), hp_dense);

        const bool stalled = hp_solve.trace.termination_reason == Termination::degenerate ||
                             hr_solve.trace.termination_reason == Termination::degenerate;
        report.inner_traces.push_back(std::move(hp_solve.trace));
        report.inner_traces.push_back(std::move(hr_solve.trace));

        // Both inner solves are monotone in their reduced form; the direct
        // evaluation can only disagree at rounding level, which we treat as
        // zero decrease and keep the previous estimates.
        if (f_next > f) {
            report.termination_reason = Termination::threshold;
            break;
        }
        report.half_step_objectives.push_back(f_half);
        report.half_step_objectives.push_back(f_next);
        hp = std::move(hp_solve.point);
        hr = std::move(hr_solve.point);
        report.outer_objectives.push_back(f_next);

        const double decrease = f - f_next;
        f = f_next;
        if (stalled) {
            report.termination_reason = Termination::degenerate;
            break;
        }
        if (decrease <= cfg.outer_epsilon) {
            report.termination_reason = Termination::threshold;
            break;
        }
    }
    report.hr_hat = hr.dense();
    report.hp_hat = hp.dense();
    return report;
}

} // namespace

double joint_objective(const ObservationStack &obs, const ComplexMatrix &hr,
                       const ComplexMatrix &hp) {
    if (hr.cols() != obs.irs_elements() || hp.rows() != obs.irs_elements() ||
        hr.rows() != obs.rx_antennas() || hp.cols() != obs.tx_antennas())
        throw DimensionError("joint_objective: channel estimates do not match the observations");
    return (obs.y1 - khatri_rao(obs.setup.reflection, hr) * hp).squaredNorm();
}

EstimationReport mo_est(const ObservationStack &obs, Index P, Index Q, const MoEstConfig &cfg,
                        RngStream &rng) {
    validate_stack(obs);
    const Index nr = obs.rx_antennas();
    const Index nt = obs.tx_antennas();
    const Index ni = obs.irs_elements();
    if (P < 1 || P > std::min(nr, ni))
        throw ParameterError("mo_est: P = " + std::to_string(P) + " outside [1, min(N_r, N_I)]");
    if (Q < 1 || Q > std::min(ni, nt))
        throw ParameterError("mo_est: Q = " + std::to_string(Q) + " outside [1, min(N_I, N_t)]");
    if (cfg.restarts < 1)
        throw ParameterError("mo_est: restarts must be at least 1");
    if (cfg.max_outer_iterations < 1)
        throw ParameterError("mo_est: max_outer_iterations must be at least 1");
    if (!(cfg.outer_epsilon > 0.0))
        throw ParameterError("mo_est: outer_epsilon must be positive");
    cfg.inner.validate();

    EstimationReport best;
    for (Index r = 0; r < cfg.restarts; ++r) {
        EstimationReport candidate = mo_est_single(obs, P, Q, cfg, rng);
        candidate.restart_index = r;
        if (r == 0 || candidate.final_objective() < best.final_objective())
            best = std::move(candidate);
    }
    return best;
}

EstimationReport alt_ls(const ObservationStack &obs, const AltLsConfig &cfg, RngStream &rng) {
    validate_stack(obs);
    if (cfg.max_iterations < 1)
        throw ParameterError("alt_ls: max_iterations must be at least 1");
    if (!(cfg.epsilon > 0.0))
        throw ParameterError("alt_ls: epsilon must be positive");
    const ComplexMatrix &v = obs.setup.reflection;
    const Index nr = obs.rx_antennas();
    const Index nt = obs.tx_antennas();
    const Index ni = obs.irs_elements();

    ComplexMatrix hr = complex_gaussian(nr, ni, 1.0, rng);
    hr /= hr.norm();
    ComplexMatrix hp = complex_gaussian(ni, nt, 1.0, rng);
    hp /= hp.norm();

    EstimationReport report;
    double f = joint_objective(obs, hr, hp);
    report.outer_objectives.push_back(f);
    report.termination_reason = Termination::max_iterations;

    for (Index k = 1; k <= cfg.max_iterations; ++k) {
        ComplexMatrix hp_next = pseudo_inverse_apply(khatri_rao(v, hr), obs.y1);
        const double f_half = joint_objective(obs, hr, hp_next);
        if (f_half > f) {
            report.termination_reason = Termination::threshold;
            break;
        }
        report.half_step_objectives.push_back(f_half);
        hp = std::move(hp_next);

        ComplexMatrix hr_next = pseudo_inverse_apply(khatri_rao(v, hp.transpose()), obs.y2).transpose();
        const double f_next = joint_objective(obs, hr_next, hp);
        if (f_next > f_half) {
            report.outer_objectives.push_back(f_half);
            report.termination_reason = Termination::threshold;
            break;
        }
        report.half_step_objectives.push_back(f_next);
        hr = std::move(hr_next);
        report.outer_objectives.push_back(f_next);

        const double decrease = f - f_next;
        f = f_next;
        if (decrease <= cfg.epsilon) {
            report.termination_reason = Termination::threshold;
            break;
        }
    }
    report.hr_hat = std::move(hr);
    report.hp_hat = std::move(hp);
    return report;
}

double nmse_cascaded(const ComplexMatrix &true_hr, const ComplexMatrix &true_hp,
                     const ComplexMatrix &hr_hat, const ComplexMatrix &hp_hat) {
    if (true_hr.cols() != true_hp.rows() || hr_hat.cols() != hp_hat.rows() ||
        true_hr.rows() != hr_hat.rows() || true_hp.cols() != hp_hat.cols())
        throw DimensionError("nmse_cascaded: inconsistent channel shapes");
    const ComplexMatrix cascade = true_hr * true_hp;
    const double reference = cascade.squaredNorm();
    if (reference == 0.0)
        throw MetricError("nmse_cascaded: true cascaded channel is zero");
    return (cascade - hr_hat * hp_hat).squaredNorm() / reference;
}

} // namespace irsest
