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

#ifndef IRSEST_CG_MO_HPP
#define IRSEST_CG_MO_HPP

#include <functional>
#include <string_view>
#include <vector>

#include "irsest/fixed_rank_manifold.hpp"

namespace irsest {

/**
 * f(h) = ||Y - A h||_F^2, or ||Y - A h^T||_F^2 when the unknown enters
 * transposed (the H_r subproblem, where A = V (.) H_p^T and Y = y2).
 *
 * A thin QR of the design, A = Q R, is computed once. The solver then
 * evaluates f = ||Q_perp^H Y||^2 + ||Q^H Y - R h||^2 and the gradient
 * R^H (R h - Q^H Y), which are exact and cost O(rank(A) * N_I * N_t)
 * instead of touching all B * N rows.
 */
class LeastSquaresProblem {
public:
    LeastSquaresProblem(ComplexMatrix design, ComplexMatrix target, bool transposed_unknown);

    /**
     * Same problem, for a design whose R-row blocks all lie in the column
     * span of row_basis (R x r, orthonormal columns), as happens for
     * V (.) H with H of rank r. The QR then runs on the B*r compressed
     * rows; objective and gradient are unchanged. Throws ParameterError
     * if the design is not in the span.
     */
    LeastSquaresProblem(ComplexMatrix design, ComplexMatrix target, bool transposed_unknown,
                        const ComplexMatrix &row_basis);

    const ComplexMatrix &design() const { return design_; }
    const ComplexMatrix &target() const { return target_; }
    bool transposed_unknown() const { return transposed_; }

    Index unknown_rows() const { return transposed_ ? target_.cols() : design_.cols(); }
    Index unknown_cols() const { return transposed_ ? design_.cols() : target_.cols(); }

    /// Direct residual evaluation.
    double objective(const ComplexMatrix &h) const;
    /// Same value through the cached QR factors.
    double reduced_objective(const ComplexMatrix &h) const;
    /// Half the true Frobenius gradient (G1 or G2 convention), through the QR factors.
    ComplexMatrix gradient(const ComplexMatrix &h) const;

private:
    void check_unknown(const ComplexMatrix &h) const;
    void factorize(const ComplexMatrix &design, const ComplexMatrix &target, double floor);

    ComplexMatrix design_;
    ComplexMatrix target_;
    bool transposed_;
    ComplexMatrix r_;             // rank(A)-row triangular factor
    ComplexMatrix projected_;     // Q^H Y
    double residual_floor_ = 0.0; // ||(I - Q Q^H) Y||^2
};

/// G1 = A^H (A h_p - Y1), evaluated literally on the full design.
ComplexMatrix euclidean_grad_hp(const LeastSquaresProblem &problem, const ComplexMatrix &hp);

/// G2 = (H_r A^T - Y2^T) A^*, evaluated literally on the full design.
ComplexMatrix euclidean_grad_hr(const LeastSquaresProblem &problem, const ComplexMatrix &hr);

/// Objective over dense m x n matrices together with its Euclidean gradient.
struct SmoothObjective {
    std::function<double(const ComplexMatrix &)> value;
    std::function<ComplexMatrix(const ComplexMatrix &)> gradient;
};

SmoothObjective make_objective(const LeastSquaresProblem &problem);

struct ArmijoConfig {
    double initial_step = 0.0; // first trial step; 0 means 1 / ||grad||
    double contraction = 0.5;
    double sufficient_decrease = 1e-4;
    Index max_backtracks = 50;
};

struct CgMoConfig {
    double epsilon = 1e-3; // stop once f^(i-1) - f^(i) <= epsilon
    Index max_iterations = 500;
    ArmijoConfig armijo;

    void validate() const;
};

enum class Termination { threshold, max_iterations, degenerate };

std::string_view to_string(Termination reason);

struct SolveTrace {
    std::vector<double> objective_values; // f^(0), f^(1), ...
    std::vector<double> gradient_norms;   // ||grad f^(i)||, same length
    std::vector<double> step_sizes;       // accepted Armijo steps
    Termination termination_reason = Termination::max_iterations;

    Index iterations() const { return static_cast<Index>(step_sizes.size()); }
};

struct SolveResult {
    FixedRankPoint point;
    SolveTrace trace;
};

struct ArmijoResult {
    double step;
    FixedRankPoint next;
    double objective;
    Index backtracks;
};

/// Called once per iteration with the iterate, its Riemannian gradient and
/// the search direction about to be used by the line search.
using IterationObserver = std::function<void(Index iteration, const FixedRankPoint &x,
                                             const TangentVector &grad,
                                             const TangentVector &direction)>;

/// Riemannian gradient: projection of the Euclidean gradient onto T_x M_k.
TangentVector riemannian_grad(const FixedRankPoint &x, const ComplexMatrix &g_euclidean);

/// PR+: max(0, <g, g - T(g_prev)> / ||g_prev||^2), g_prev already transported.
double polak_ribiere_beta(const TangentVector &grad_now, const TangentVector &grad_prev_transported,
                          double grad_prev_norm2);

/**
 * Backtracking line search along the retraction curve t -> R(x, t d).
 * Accepts the first t = initial_step * contraction^i with
 * f(R(x, t d)) <= f(x) + c1 t <grad, d>. Throws StallError when none of
 * max_backtracks + 1 trials qualifies, ParameterError if d is not a
 * descent direction.
 */
ArmijoResult armijo_step(const FixedRankPoint &x, const TangentVector &d,
                         const SmoothObjective &f, const TangentVector &grad,
                         const ArmijoConfig &cfg, double f_x);

ArmijoResult armijo_step(const FixedRankPoint &x, const TangentVector &d,
                         const LeastSquaresProblem &problem, const TangentVector &grad,
                         const ArmijoConfig &cfg);

/**
 * Riemannian conjugate gradient on M_k.
 *
 * Each iteration projects the Euclidean gradient, forms the PR+ conjugate
 * direction with the previous direction transported into the current
 * tangent space (restarting with -grad when that is not a descent
 * direction), and takes an Armijo step through the truncated-SVD
 * retraction. Stops when the objective decrease is at most epsilon; a
 * line-search stall ends the solve with Termination::degenerate and the
 * partial trace, unless f(x) <= epsilon already guarantees the threshold.
 */
SolveResult cg_mo_solve(const SmoothObjective &f, const FixedRankPoint &x0, const CgMoConfig &cfg,
                        const IterationObserver &observer = {});

SolveResult cg_mo_solve(const LeastSquaresProblem &problem, const FixedRankPoint &x0,
                        const CgMoConfig &cfg, const IterationObserver &observer = {});

} // namespace irsest

#endif
