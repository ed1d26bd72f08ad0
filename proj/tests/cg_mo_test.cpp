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

#include <gtest/gtest.h>

#include <cmath>

#include "irsest/cg_mo.hpp"
#include "irsest/pilot_protocol.hpp"
#include "test_support.hpp"

namespace irsest {
namespace {

using testing::randn;
using testing::rel_error;

// Random H_p subproblem: A = V (.) H_r, Y = A H_p + noise.
LeastSquaresProblem random_hp_problem(Index nr, Index ni, Index nt, Index blocks, double noise,
                                      RngStream &rng) {
    const ComplexMatrix v = dft_matrix(blocks, ni);
    const ComplexMatrix a = khatri_rao(v, randn(nr, ni, rng));
    return {a, a * randn(ni, nt, rng) + noise * randn(blocks * nr, nt, rng), false};
}

LeastSquaresProblem random_hr_problem(Index nr, Index ni, Index nt, Index blocks, double noise,
                                      RngStream &rng) {
    const ComplexMatrix v = dft_matrix(blocks, ni);
    const ComplexMatrix a = khatri_rao(v, randn(ni, nt, rng).transpose());
    return {a, a * randn(nr, ni, rng).transpose() + noise * randn(blocks * nt, nr, rng), true};
}

// --- objective -------------------------------------------------------------------------

TEST(Objective, ConsistentSystemIsZero) {
    RngStream rng(1);
    const ComplexMatrix a = randn(6, 3, rng), h = randn(3, 2, rng);
    const LeastSquaresProblem p(a, a * h, false);
    EXPECT_LT(p.objective(h), 1e-24);
    EXPECT_LT(p.reduced_objective(h), 1e-20);
}

TEST(Objective, ZeroEstimateGivesTargetNorm) {
    RngStream rng(2);
    const ComplexMatrix a = randn(6, 3, rng), y = randn(6, 2, rng);
    const LeastSquaresProblem p(a, y, false);
    EXPECT_NEAR(p.objective(ComplexMatrix::Zero(3, 2)), y.squaredNorm(), 1e-12);
    const LeastSquaresProblem pt(a, y, true);
    EXPECT_NEAR(pt.objective(ComplexMatrix::Zero(2, 3)), y.squaredNorm(), 1e-12);
}

TEST(Objective, EntrywiseOracleAndReducedForm) {
    RngStream rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        const bool transposed = trial % 2 == 1;
        const LeastSquaresProblem p = transposed ? random_hr_problem(2, 3, 3, 3, 0.5, rng)
                                                 : random_hp_problem(2, 3, 3, 3, 0.5, rng);
        const ComplexMatrix h = randn(p.unknown_rows(), p.unknown_cols(), rng);
        const ComplexMatrix pred = transposed ? ComplexMatrix(p.design() * h.transpose())
                                              : ComplexMatrix(p.design() * h);
        const double oracle = testing::sum_sq(p.target() - pred);
        EXPECT_NEAR(p.objective(h), oracle, 1e-12 * oracle);
        EXPECT_NEAR(p.reduced_objective(h), oracle, 1e-10 * oracle);
    }
}

TEST(Objective, RowBasisCompressionIsExact) {
    RngStream rng(4);
    const Index nr = 5, ni = 6, nt = 4, blocks = 6, k = 2;
    const ComplexMatrix v = dft_matrix(blocks, ni);
    const FixedRankPoint hr = random_point(nr, ni, k, rng);
    const ComplexMatrix y1 = randn(blocks * nr, nt, rng);
    const LeastSquaresProblem full(khatri_rao(v, hr.dense()), y1, false);
    const LeastSquaresProblem compressed(khatri_rao(v, hr.dense()), y1, false, hr.left());
    const FixedRankPoint hp = random_point(ni, nt, k, rng);
    const ComplexMatrix y2 = randn(blocks * nt, nr, rng);
    const LeastSquaresProblem full_t(khatri_rao(v, hp.dense().transpose()), y2, true);
    const LeastSquaresProblem compressed_t(khatri_rao(v, hp.dense().transpose()), y2, true,
                                           hp.right().conjugate());
    for (int i = 0; i < 5; ++i) {
        const ComplexMatrix h = randn(ni, nt, rng);
        EXPECT_NEAR(compressed.reduced_objective(h), full.objective(h), 1e-10 * full.objective(h));
        EXPECT_LT(rel_error(compressed.gradient(h), euclidean_grad_hp(full, h)), 1e-10);
        const ComplexMatrix g = randn(nr, ni, rng);
        EXPECT_NEAR(compressed_t.reduced_objective(g), full_t.objective(g), 1e-10 * full_t.objective(g));
        EXPECT_LT(rel_error(compressed_t.gradient(g), euclidean_grad_hr(full_t, g)), 1e-10);
    }
    // a basis that does not span the design blocks is rejected
    EXPECT_THROW(LeastSquaresProblem(khatri_rao(v, hr.dense()), y1, false, random_point(nr, 2, 2, rng).left()),
                 ParameterError);
}

TEST(Objective, ShapeErrors) {
    RngStream rng(5);
    EXPECT_THROW(LeastSquaresProblem(randn(4, 2, rng), randn(3, 2, rng), false), DimensionError);
    const LeastSquaresProblem p(randn(4, 2, rng), randn(4, 3, rng), false);
    EXPECT_THROW(p.objective(randn(3, 3, rng)), DimensionError);
    EXPECT_THROW(p.gradient(randn(2, 2, rng)), DimensionError);
    EXPECT_THROW(euclidean_grad_hr(p, randn(3, 2, rng)), ParameterError);
}

// --- gradients ----------------------------------------------------------------------------

TEST(GradientHp, ZeroResidualGivesZero) {
    RngStream rng(6);
    const ComplexMatrix a = randn(8, 3, rng), h = randn(3, 2, rng);
    const LeastSquaresProblem p(a, a * h, false);
    EXPECT_LT(euclidean_grad_hp(p, h).norm(), 1e-12);
}

TEST(GradientHp, HandEvaluatedScalar) {
    ComplexMatrix a(1, 1), y(1, 1), h(1, 1);
    a << 2.0;
    y << 4.0;
    h << 1.0;
    const LeastSquaresProblem p(a, y, false);
    EXPECT_NEAR(std::abs(euclidean_grad_hp(p, h)(0, 0) - Complex(-4.0)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(p.gradient(h)(0, 0) - Complex(-4.0)), 0.0, 1e-14);
}

TEST(GradientHp, FiniteDifference) {
    RngStream rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        const LeastSquaresProblem p = random_hp_problem(2 + trial % 3, 3, 2 + trial % 2, 3, 0.3, rng);
        const ComplexMatrix h = randn(p.unknown_rows(), p.unknown_cols(), rng);
        const ComplexMatrix delta = randn(h.rows(), h.cols(), rng);
        const double fd = testing::central_difference(
            [&](const ComplexMatrix &z) { return p.objective(z); }, h, delta);
        const double analytic = 2.0 * testing::trace_inner(delta, euclidean_grad_hp(p, h));
        EXPECT_LT(std::abs(fd - analytic), 1e-5 * std::abs(analytic)) << "trial " << trial;
    }
}

TEST(GradientHr, ZeroResidualGivesZero) {
    RngStream rng(8);
    const ComplexMatrix a = randn(9, 3, rng), h = randn(2, 3, rng);
    const LeastSquaresProblem p(a, a * h.transpose(), true);
    EXPECT_LT(euclidean_grad_hr(p, h).norm(), 1e-12);
}

TEST(GradientHr, FiniteDifference) {
    RngStream rng(9);
    for (int trial = 0; trial < 50; ++trial) {
        const LeastSquaresProblem p = random_hr_problem(2 + trial % 2, 3, 2 + trial % 3, 3, 0.3, rng);
        const ComplexMatrix h = randn(p.unknown_rows(), p.unknown_cols(), rng);
        const ComplexMatrix delta = randn(h.rows(), h.cols(), rng);
        const double fd = testing::central_difference(
            [&](const ComplexMatrix &z) { return p.objective(z); }, h, delta);
        const double analytic = 2.0 * testing::trace_inner(delta, euclidean_grad_hr(p, h));
        EXPECT_LT(std::abs(fd - analytic), 1e-5 * std::abs(analytic)) << "trial " << trial;
    }
}

TEST(GradientHr, TransposeOfHpStyleGradient) {
    // 2 x 2 x 3 instance: N_r = 2, N_t = 2, N_I = 3
    RngStream rng(10);
    const LeastSquaresProblem p = random_hr_problem(2, 3, 2, 3, 0.4, rng);
    const ComplexMatrix hr = randn(2, 3, rng);
    const ComplexMatrix &a = p.design();
    const ComplexMatrix g1_style = a.adjoint() * (a * hr.transpose() - p.target());
    EXPECT_LT(rel_error(euclidean_grad_hr(p, hr), g1_style.transpose()), 1e-13);
}

TEST(Gradient, ReducedFormMatchesLiteralFormulas) {
    RngStream rng(11);
    for (int trial = 0; trial < 10; ++trial) {
        const LeastSquaresProblem hp = random_hp_problem(3, 4, 3, 4, 0.2, rng);
        const ComplexMatrix x = randn(4, 3, rng);
        EXPECT_LT(rel_error(hp.gradient(x), euclidean_grad_hp(hp, x)), 1e-10);
        const LeastSquaresProblem hr = random_hr_problem(3, 4, 3, 4, 0.2, rng);
        const ComplexMatrix z = randn(3, 4, rng);
        EXPECT_LT(rel_error(hr.gradient(z), euclidean_grad_hr(hr, z)), 1e-10);
    }
}

// --- riemannian_grad ----------------------------------------------------------------------

TEST(RiemannianGrad, DelegatesToProjection) {
    RngStream rng(12);
    const FixedRankPoint x = random_point(6, 5, 2, rng);
    const ComplexMatrix g = randn(6, 5, rng);
    const TangentVector rg = riemannian_grad(x, g);
    const TangentVector pg = project(x, g);
    EXPECT_EQ(rg.core, pg.core);
    EXPECT_EQ(rg.up, pg.up);
    EXPECT_EQ(rg.vp, pg.vp);
    // tangent input unchanged, normal input vanishes
    EXPECT_LT(rel_error(riemannian_grad(x, pg.dense()).dense(), pg.dense()), 1e-12);
    const ComplexMatrix pu_perp = ComplexMatrix::Identity(6, 6) - x.left() * x.left().adjoint();
    const ComplexMatrix pv_perp = ComplexMatrix::Identity(5, 5) - x.right() * x.right().adjoint();
    EXPECT_LT(riemannian_grad(x, pu_perp * g * pv_perp).dense().norm(), 1e-12);
}

// --- polak_ribiere_beta ------------------------------------------------------------------------

TEST(PolakRibiere, Examples) {
    // 1 x 2 rank-1 manifold: the tangent space is the whole ambient space
    ComplexMatrix base(1, 2);
    base << 1.0, 0.5;
    const FixedRankPoint x = from_dense(base, 1);
    ComplexMatrix e1(1, 2), e2(1, 2);
    e1 << 1.0, 0.0;
    e2 << 0.0, 1.0;
    const TangentVector g_now = project(x, e1);
    const TangentVector g_prev = project(x, e2);
    EXPECT_NEAR(polak_ribiere_beta(g_now, g_prev, 1.0), 1.0, 1e-14);
    EXPECT_NEAR(polak_ribiere_beta(g_now, g_now, 1.0), 0.0, 1e-14);
    EXPECT_NEAR(polak_ribiere_beta(g_now, zero_tangent(x), 4.0), 0.25, 1e-14);
    // negative values are clipped
    EXPECT_EQ(polak_ribiere_beta(g_now, g_now * 3.0, 1.0), 0.0);
    EXPECT_THROW(polak_ribiere_beta(g_now, g_prev, 0.0), ParameterError);
}

// --- armijo_step ------------------------------------------------------------------------------

TEST(Armijo, AcceptedStepSatisfiesSufficientDecrease) {
    RngStream rng(13);
    for (int trial = 0; trial < 10; ++trial) {
        const LeastSquaresProblem p = random_hp_problem(3, 4, 3, 4, 0.5, rng);
        const FixedRankPoint x = random_point(4, 3, 2, rng);
        const TangentVector grad = riemannian_grad(x, p.gradient(x.dense()));
        ArmijoConfig cfg;
        cfg.initial_step = 1.0 / std::sqrt(inner(grad, grad));
        const ArmijoResult r = armijo_step(x, -grad, p, grad, cfg);
        const double f0 = p.objective(x.dense());
        const double f1 = p.objective(retract(x, -grad, r.step).dense());
        EXPECT_LE(f1, f0 + cfg.sufficient_decrease * r.step * inner(grad, -grad) + 1e-10 * f0);
        EXPECT_NEAR(r.objective, f1, 1e-9 * f0);
        EXPECT_DOUBLE_EQ(r.step, cfg.initial_step * std::pow(cfg.contraction, r.backtracks));
    }
}

TEST(Armijo, ClosedFormOneDimensionalQuadratic) {
    // f(h) = |h - a|^2 on 1 x 1 matrices with gradient (h - a). From
    // x = a + 1 along d = -1, f(x + t d) = (1 - t)^2 and the condition
    // (1 - t)^2 <= 1 - c1 t holds exactly for t <= 2 - c1. Starting 4x
    // beyond the exact minimizer t* = 1: 4 and 2 fail, 1 passes.
    const Complex a(10.0, 0.0);
    SmoothObjective f{
        [a](const ComplexMatrix &h) { return std::norm(h(0, 0) - a); },
        [a](const ComplexMatrix &h) {
            ComplexMatrix g(1, 1);
            g << h(0, 0) - a;
            return g;
        },
    };
    ComplexMatrix x0(1, 1);
    x0 << a + 1.0;
    const FixedRankPoint x = from_dense(x0, 1);
    const TangentVector grad = riemannian_grad(x, f.gradient(x.dense()));
    ArmijoConfig cfg;
    cfg.initial_step = 4.0;
    cfg.contraction = 0.5;
    const ArmijoResult r = armijo_step(x, -grad, f, grad, cfg, f.value(x.dense()));
    EXPECT_EQ(r.backtracks, 2);
    EXPECT_DOUBLE_EQ(r.step, 1.0);
    EXPECT_NEAR(r.objective, 0.0, 1e-20);
}

TEST(Armijo, RejectsAscentDirectionAndStalls) {
    RngStream rng(14);
    const LeastSquaresProblem p = random_hp_problem(2, 3, 2, 3, 0.5, rng);
    const FixedRankPoint x = random_point(3, 2, 1, rng);
    const TangentVector grad = riemannian_grad(x, p.gradient(x.dense()));
    ArmijoConfig cfg;
    cfg.initial_step = 1.0;
    EXPECT_THROW(armijo_step(x, grad, p, grad, cfg), ParameterError);

    // an objective that never decreases exhausts the budget
    const SmoothObjective flat{[](const ComplexMatrix &) { return 1.0; },
                               [&](const ComplexMatrix &h) { return p.gradient(h); }};
    cfg.max_backtracks = 5;
    EXPECT_THROW(armijo_step(x, -grad, flat, grad, cfg, 1.0), StallError);
}

// --- cg_mo_solve --------------------------------------------------------------------------------

TEST(CgMoConfig, Validation) {
    CgMoConfig cfg;
    EXPECT_EQ(cfg.epsilon, 1e-3);
    EXPECT_EQ(cfg.max_iterations, 500);
    EXPECT_NO_THROW(cfg.validate());
    CgMoConfig bad = cfg;
    bad.epsilon = 0.0;
    EXPECT_THROW(bad.validate(), ParameterError);
    bad = cfg;
    bad.armijo.contraction = 1.0;
    EXPECT_THROW(bad.validate(), ParameterError);
    bad = cfg;
    bad.armijo.sufficient_decrease = 0.0;
    EXPECT_THROW(bad.validate(), ParameterError);
    bad = cfg;
    bad.max_iterations = 0;
    EXPECT_THROW(bad.validate(), ParameterError);
}

TEST(CgMoSolve, NoiselessConsistentInstanceConverges) {
    // N_I = 4, N_t = 4, B = 4, Q = 2, full-rank random H_r
    int solved = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        RngStream rng(100 + seed);
        const ComplexMatrix v = dft_matrix(4, 4);
        const ComplexMatrix a = khatri_rao(v, randn(4, 4, rng));
        const ComplexMatrix hp = random_point(4, 4, 2, rng).dense();
        const LeastSquaresProblem p(a, a * hp, false);
        CgMoConfig cfg;
        cfg.epsilon = 1e-14 * p.target().squaredNorm();
        cfg.max_iterations = 200;
        const SolveResult r = cg_mo_solve(p, random_point(4, 4, 2, rng), cfg);
        if (p.objective(r.point.dense()) < 1e-8 * p.target().squaredNorm())
            ++solved;
    }
    EXPECT_GE(solved, 9);
}

TEST(CgMoSolve, OptimalStartStopsImmediately) {
    RngStream rng(15);
    const ComplexMatrix a = khatri_rao(dft_matrix(4, 4), randn(3, 4, rng));
    const FixedRankPoint hp = random_point(4, 3, 2, rng);
    const LeastSquaresProblem p(a, a * hp.dense(), false);
    const SolveResult r = cg_mo_solve(p, hp, CgMoConfig{});
    EXPECT_LE(r.trace.iterations(), 1);
    EXPECT_EQ(r.trace.termination_reason, Termination::threshold);
}

TEST(CgMoSolve, MonotoneTraceTangentDirectionsAndSteepestStart) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        RngStream rng(200 + seed);
        const bool transposed = seed % 2 == 1;
        const LeastSquaresProblem p = transposed ? random_hr_problem(4, 6, 5, 6, 0.3, rng)
                                                 : random_hp_problem(4, 6, 5, 6, 0.3, rng);
        const FixedRankPoint x0 = random_point(p.unknown_rows(), p.unknown_cols(), 2, rng);
        CgMoConfig cfg;
        cfg.epsilon = 1e-9;
        double worst_tangency = 0.0;
        bool first_is_steepest = false;
        const SolveResult r = cg_mo_solve(
            p, x0, cfg,
            [&](Index iter, const FixedRankPoint &x, const TangentVector &grad,
                const TangentVector &d) {
                worst_tangency = std::max({worst_tangency,
                                           (d.up.adjoint() * x.left()).cwiseAbs().maxCoeff(),
                                           (d.vp.adjoint() * x.right()).cwiseAbs().maxCoeff()});
                EXPECT_TRUE(d.base.same_frame(x));
                if (iter == 0)
                    first_is_steepest = d.core == -grad.core && d.up == -grad.up && d.vp == -grad.vp;
            });
        EXPECT_TRUE(first_is_steepest);
        EXPECT_LT(worst_tangency, 1e-9);
        const auto &f = r.trace.objective_values;
        ASSERT_GE(f.size(), 2u);
        for (std::size_t i = 1; i < f.size(); ++i)
            EXPECT_LE(f[i], f[i - 1]) << "seed " << seed << " iteration " << i;
        EXPECT_EQ(f.size(), r.trace.gradient_norms.size());
        EXPECT_EQ(f.size(), r.trace.step_sizes.size() + 1);
        EXPECT_NEAR(f.back(), p.objective(r.point.dense()), 1e-9 * f.front());
    }
}

TEST(CgMoSolve, MaxIterationsReason) {
    RngStream rng(16);
    const LeastSquaresProblem p = random_hp_problem(4, 6, 5, 6, 0.3, rng);
    CgMoConfig cfg;
    cfg.max_iterations = 2;
    cfg.epsilon = 1e-12;
    const SolveResult r = cg_mo_solve(p, random_point(6, 5, 2, rng), cfg);
    EXPECT_EQ(r.trace.termination_reason, Termination::max_iterations);
    EXPECT_EQ(r.trace.iterations(), 2);
    EXPECT_EQ(to_string(Termination::max_iterations), "max_iterations");
}

TEST(CgMoSolve, ShapeMismatchThrows) {
    RngStream rng(17);
    const LeastSquaresProblem p = random_hp_problem(2, 3, 2, 3, 0.3, rng);
    EXPECT_THROW(cg_mo_solve(p, random_point(2, 3, 1, rng), CgMoConfig{}), DimensionError);
}

} // namespace
} // namespace irsest
