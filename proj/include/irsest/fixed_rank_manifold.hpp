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

#ifndef IRSEST_FIXED_RANK_MANIFOLD_HPP
#define IRSEST_FIXED_RANK_MANIFOLD_HPP

#include "irsest/matrix_core.hpp"

namespace irsest {

/// Orthonormality tolerance enforced on point factors.
inline constexpr double kOrthonormalTol = 1e-10;
/// Singular values at or below this fraction of sigma_1 count as zero.
inline constexpr double kRankRelTol = 1e-12;

/**
 * Point on the complex manifold M_k of m x n matrices of rank exactly k,
 * stored as X = U diag(s) V^H.
 *
 * The constructor enforces the invariants: U^H U = I, V^H V = I to
 * kOrthonormalTol, and s strictly positive (above kRankRelTol * s_1).
 */
class FixedRankPoint {
public:
    explicit FixedRankPoint(SvdFactors factors);

    const ComplexMatrix &left() const { return f_.left; }
    const RealVector &singular_values() const { return f_.singular_values; }
    const ComplexMatrix &right() const { return f_.right; }
    const SvdFactors &factors() const { return f_; }

    Index rows() const { return f_.left.rows(); }
    Index cols() const { return f_.right.rows(); }
    Index rank() const { return f_.singular_values.size(); }

    ComplexMatrix dense() const { return f_.reconstruct(); }
    double frobenius_norm() const { return f_.singular_values.norm(); }

    /// True when both points share bit-identical U and V factors.
    bool same_frame(const FixedRankPoint &other) const;

private:
    SvdFactors f_;
};

/**
 * Tangent vector at `base` in factored form
 *   xi = U M V^H + U_p V^H + U V_p^H,   U_p^H U = 0,  V_p^H V = 0.
 *
 * Arithmetic is defined only between vectors sharing the same base frame.
 */
struct TangentVector {
    FixedRankPoint base;
    ComplexMatrix core; // M, k x k
    ComplexMatrix up;   // U_p, m x k
    ComplexMatrix vp;   // V_p, n x k

    ComplexMatrix dense() const;

    TangentVector operator-() const;
    TangentVector operator*(double alpha) const;
    TangentVector operator+(const TangentVector &other) const;
    TangentVector operator-(const TangentVector &other) const;
};

inline TangentVector operator*(double alpha, const TangentVector &xi) { return xi * alpha; }

/// Best rank-k approximation of x. Throws DegenerateRankError if sigma_k is numerically zero.
FixedRankPoint from_dense(const ComplexMatrix &x, Index k);

/// Re tr(a^H b) for ambient matrices.
double inner(const ComplexMatrix &a, const ComplexMatrix &b);

/// Re tr(xi^H eta). Uses the factored formula when both share a base frame.
double inner(const TangentVector &xi, const TangentVector &eta);

TangentVector zero_tangent(const FixedRankPoint &x);

/**
 * Orthogonal projection onto T_x M_k:
 *   P_U J P_V + P_U^perp J P_V + P_U J P_V^perp,
 * returned as M = U^H J V, U_p = J V - U M, V_p = J^H U - V M^H.
 */
TangentVector project(const FixedRankPoint &x, const ComplexMatrix &j);

/**
 * Rank-k truncated SVD of x + step * xi.
 *
 * When 2k fits in both dimensions the update is factored through a
 * (2k x 2k) core so the cost is O((m + n) k^2); otherwise the dense sum is
 * decomposed. A numerically rank-deficient result is perturbed once by a
 * tangent direction of norm 1e-12 * ||x||, then DegenerateRankError.
 */
FixedRankPoint retract(const FixedRankPoint &x, const TangentVector &xi, double step);

/// Projection of xi (anchored anywhere) onto the tangent space at x_new.
TangentVector transport(const FixedRankPoint &x_new, const TangentVector &xi);

/// from_dense of a product of m x k and k x n CN(0,1) factors, scaled to unit Frobenius norm.
FixedRankPoint random_point(Index m, Index n, Index k, RngStream &rng);

} // namespace irsest

#endif
