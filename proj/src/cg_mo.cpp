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

#include "irsest/cg_mo.hpp"

#include <cmath>
#include <string>

namespace irsest {

// ---------------------------------------------------------------------------
// LeastSquaresProblem

LeastSquaresProblem::LeastSquaresProblem(ComplexMatrix design, ComplexMatrix target,
                                         bool transposed_unknown)
    : design_(std::move(design)), target_(std::move(target)), transposed_(transposed_unknown) {
    if (design_.rows() != target_.rows())
        throw DimensionError("LeastSquaresProblem: design has " + std::to_string(design_.rows()) +
                             " rows, target has " + std::to_string(target_.rows()));
    if (design_.size() == 0 || target_.size() == 0)
        throw DimensionError("LeastSquaresProblem: empty operand");
    factorize(design_, target_, 0.0);
}

LeastSquaresProblem::LeastSquaresProblem(ComplexMatrix design, ComplexMatrix target,
                                         bool transposed_unknown, const ComplexMatrix &row_basis)
    : design_(std::move(design)), target_(std::move(target)), transposed_(transposed_unknown) {
    if (design_.rows() != target_.rows())
        throw DimensionError("LeastSquaresProblem: design has " + std::to_string(design_.rows()) +
                             " rows, target has " + std::to_string(target_.rows()));
    if (design_.size() == 0 || target_.size() == 0 || row_basis.size() == 0)
        throw DimensionError("LeastSquaresProblem: empty operand");
    const Index block = row_basis.rows();
    const Index r = row_basis.cols();
    if (design_.rows() % block != 0)
        throw DimensionError("LeastSquaresProblem: design rows are not a multiple of the basis rows");
    const Index blocks = design_.rows() / block;

    ComplexMatrix small_design(blocks * r, design_.cols());
    ComplexMatrix small_target(blocks * r, target_.cols());
    double outside = 0.0;
    double leak = 0.0;
    for (Index b = 0; b < blocks; ++b) {
        const auto a_b = design_.middleRows(b * block, block);
        const auto y_b = target_.middleRows(b * block, block);
        small_design.middleRows(b * r, r).noalias() = row_basis.adjoint() * a_b;
        small_target.middleRows(b * r, r).noalias() = row_basis.adjoint() * y_b;
        leak += (a_b - row_basis * small_design.middleRows(b * r, r)).squaredNorm();
        outside += (y_b - row_basis * small_target.middleRows(b * r, r)).squaredNorm();
    }
    if (leak > 1e-16 * design_.squaredNorm())
        throw ParameterError("LeastSquaresProblem: design is not in the span of the row basis");
    factorize(small_design, small_target, outside);
}

void LeastSquaresProblem::factorize(const ComplexMatrix &design, const ComplexMatrix &target,
                                    double floor) {
    const Index rank_bound = std::min(design.rows(), design.cols());
    Eigen::HouseholderQR<ComplexMatrix> qr(design);
    r_ = qr.matrixQR().topRows(rank_bound).triangularView<Eigen::Upper>();
    const ComplexMatrix rotated = qr.householderQ().adjoint() * target;
    projected_ = rotated.topRows(rank_bound);
    residual_floor_ = floor + rotated.bottomRows(design.rows() - rank_bound).squaredNorm();
}

void LeastSquaresProblem::check_unknown(const ComplexMatrix &h) const {
    if (h.rows() != unknown_rows() || h.cols() != unknown_cols())
        throw DimensionError("LeastSquaresProblem: unknown is " + std::to_string(h.rows()) + "x" +
                             std::to_string(h.cols()) + ", expected " +
                             std::to_string(unknown_rows()) + "x" + std::to_string(unknown_cols()));
}

double LeastSquaresProblem::objective(const ComplexMatrix &h) const {
    check_unknown(h);
    if (transposed_)
        return (target_ - design_ * h.transpose()).squaredNorm();
    return (target_ - design_ * h).squaredNorm();
}

double LeastSquaresProblem::reduced_objective(const ComplexMatrix &h) const {
    check_unknown(h);
    if (transposed_)
        return residual_floor_ + (projected_ - r_ * h.transpose()).squaredNorm();
    return residual_floor_ + (projected_ - r_ * h).squaredNorm();
}

ComplexMatrix LeastSquaresProblem::gradient(const ComplexMatrix &h) const {
    check_unknown(h);
    if (transposed_)
        return (r_.adjoint() * (r_ * h.transpose() - projected_)).transpose();
    return r_.adjoint() * (r_ * h - projected_);
}

ComplexMatrix euclidean_grad_hp(const LeastSquaresProblem &problem, const ComplexMatrix &hp) {
    if (problem.transposed_unknown())
        throw ParameterError("euclidean_grad_hp: problem expects a transposed unknown");
    if (hp.rows() != problem.unknown_rows() || hp.cols() != problem.unknown_cols())
        throw DimensionError("euclidean_grad_hp: H_p shape mismatch");
    const ComplexMatrix &a = problem.design();
    return a.adjoint() * (a * hp - problem.target());
}

ComplexMatrix euclidean_grad_hr(const LeastSquaresProblem &problem, const ComplexMatrix &hr) {
    if (!problem.transposed_unknown())
        throw ParameterError("euclidean_grad_hr: problem expects a non-transposed unknown");
    if (hr.rows() != problem.unknown_rows() || hr.cols() != problem.unknown_cols())
        throw DimensionError("euclidean_grad_hr: H_r shape mismatch");
    const ComplexMatrix &a = problem.design();
    return (hr * a.transpose() - problem.target().transpose()) * a.conjugate();
}

SmoothObjective make_objective(const LeastSquaresProblem &problem) {
    return {[&problem](const ComplexMatrix &h) { return problem.reduced_objective(h); },
            [&problem](const ComplexMatrix &h) { return problem.gradient(h); }};
}

// ---------------------------------------------------------------------------
// Solver pieces

void CgMoConfig::validate() const {
    if (!(epsilon > 0.0))
        throw ParameterError("CgMoConfig: epsilon must be positive");
    if (max_iterations < 1)
        throw ParameterError("CgMoConfig: max_iterations must be at least 1");
    if (!(armijo.contraction > 0.0 && armijo.contraction < 1.0))
        throw ParameterError("CgMoConfig: contraction must lie in (0, 1)");
    if (!(armijo.sufficient_decrease > 0.0 && armijo.sufficient_decrease < 1.0))
        throw ParameterError("CgMoConfig: sufficient_decrease must lie in (0, 1)");
    if (!(armijo.initial_step >= 0.0))
        throw ParameterError("CgMoConfig: initial_step must be non-negative");
    if (armijo.max_backtracks < 0)
        throw ParameterError("CgMoConfig: max_backtracks must be non-negative");
}

std::string_view to_string(Termination reason) {
    switch (reason) {
    case Termination::threshold:
        return "threshold";
    case Termination::max_iterations:
        return "max_iterations";
    case Termination::degenerate:
        return "degenerate";
    }
    return "unknown";
}

TangentVector riemannian_grad(const FixedRankPoint &x, const ComplexMatrix &g_euclidean) {
    return project(x, g_euclidean);
}

double polak_ribiere_beta(const TangentVector &grad_now, const TangentVector &grad_prev_transported,
                          double grad_prev_norm2) {
    if (!(grad_prev_norm2 > 0.0))
        throw ParameterError("polak_ribiere_beta: previous gradient norm must be positive");
    const double beta = inner(grad_now, grad_now - grad_prev_transported) / grad_prev_norm2;
    return std::max(0.0, beta);
}

ArmijoResult armijo_step(const FixedRankPoint &x, const TangentVector &d,
                         const SmoothObjective &f, const TangentVector &grad,
                         const ArmijoConfig &cfg, double f_x) {
    const double slope = inner(grad, d);
    if (!(slope < 0.0))
        throw ParameterError("armijo_step: direction is not a descent direction");
    if (!(cfg.initial_step > 0.0))
        throw ParameterError("armijo_step: initial step must be positive");

    double step = cfg.initial_step;
    for (Index i = 0; i <= cfg.max_backtracks; ++i, step *= cfg.contraction) {
        FixedRankPoint candidate = retract(x, d, step);
        const double value = f.value(candidate.dense());
        if (value <= f_x + cfg.sufficient_decrease * step * slope)
            return {step, std::move(candidate), value, i};
    }
    throw StallError("armijo_step: no sufficient decrease after " +
                     std::to_string(cfg.max_backtracks) + " backtracks");
}

ArmijoResult armijo_step(const FixedRankPoint &x, const TangentVector &d,
                         const LeastSquaresProblem &problem, const TangentVector &grad,
                         const ArmijoConfig &cfg) {
    const SmoothObjective f = make_objective(problem);
    return armijo_step(x, d, f, grad, cfg, f.value(x.dense()));
}

// ---------------------------------------------------------------------------
// CG-MO

SolveResult cg_mo_solve(const SmoothObjective &f, const FixedRankPoint &x0, const CgMoConfig &cfg,
                        const IterationObserver &observer) {
    cfg.validate();
    SolveResult result{x0, {}};
    SolveTrace &trace = result.trace;
    FixedRankPoint &x = result.point;

    double fx = f.value(x.dense());
    TangentVector grad = riemannian_grad(x, f.gradient(x.dense()));
    double grad_norm2 = inner(grad, grad);
    trace.objective_values.push_back(fx);
    trace.gradient_norms.push_back(std::sqrt(grad_norm2));

    TangentVector direction = -grad;
    double last_step = 0.0;

    for (Index iter = 0; iter < cfg.max_iterations; ++iter) {
        if (grad_norm2 == 0.0) {
            trace.termination_reason = Termination::threshold;
            return result;
        }
        if (!(inner(grad, direction) < 0.0))
            direction = -grad;
        if (observer)
            observer(iter, x, grad, direction);

        ArmijoConfig line = cfg.armijo;
        if (iter > 0)
            line.initial_step = 2.0 * last_step;
        else if (line.initial_step == 0.0)
            line.initial_step = 1.0 / std::sqrt(grad_norm2);

        ArmijoResult accepted = [&]() -> ArmijoResult {
            try {
                return armijo_step(x, direction, f, grad, line, fx);
            } catch (const StallError &) {
                return {0.0, x, fx, -1};
            }
        }();
        if (accepted.backtracks < 0) {
            // f >= 0, so once f <= epsilon no further step can decrease it by more.
            trace.termination_reason =
                fx <= cfg.epsilon ? Termination::threshold : Termination::degenerate;
            return result;
        }

        const double decrease = fx - accepted.objective;
        x = std::move(accepted.next);
        fx = accepted.objective;
        last_step = accepted.step;

        const TangentVector grad_next = riemannian_grad(x, f.gradient(x.dense()));
        const double grad_next_norm2 = inner(grad_next, grad_next);
        trace.objective_values.push_back(fx);
        trace.gradient_norms.push_back(std::sqrt(grad_next_norm2));
        trace.step_sizes.push_back(last_step);

        if (decrease <= cfg.epsilon) {
            trace.termination_reason = Termination::threshold;
            return result;
        }

        const double beta = polak_ribiere_beta(grad_next, transport(x, grad), grad_norm2);
        direction = -grad_next + beta * transport(x, direction);
        grad = grad_next;
        grad_norm2 = grad_next_norm2;
    }
    trace.termination_reason = Termination::max_iterations;
    return result;
}

SolveResult cg_mo_solve(const LeastSquaresProblem &problem, const FixedRankPoint &x0,
                        const CgMoConfig &cfg, const IterationObserver &observer) {
    if (x0.rows() != problem.unknown_rows() || x0.cols() != problem.unknown_cols())
        throw DimensionError("cg_mo_solve: initial point shape does not match the problem");
    return cg_mo_solve(make_objective(problem), x0, cfg, observer);
}

} // namespace irsest
