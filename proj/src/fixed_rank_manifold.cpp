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

#include "irsest/fixed_rank_manifold.hpp"

#include <iostream>
#include <optional>
#include <string>

namespace irsest {

namespace {

// Tighter than kOrthonormalTol so that drift across many retractions
// cannot accumulate into an invariant violation.
constexpr double kFactoredOrthTol = 1e-13;

double orthonormality_error(const ComplexMatrix &q) {
    const Index k = q.cols();
    return (q.adjoint() * q - ComplexMatrix::Identity(k, k)).cwiseAbs().maxCoeff();
}

bool rank_deficient(const RealVector &s) {
    return s.size() == 0 || !(s(0) > 0.0) || !(s(s.size() - 1) > kRankRelTol * s(0)) ||
           !s.allFinite();
}

void check_same_frame(const TangentVector &a, const TangentVector &b) {
    if (!a.base.same_frame(b.base))
        throw DimensionError("tangent vectors live in different tangent spaces");
}

ComplexMatrix orthonormal_basis(const ComplexMatrix &a) {
    Eigen::HouseholderQR<ComplexMatrix> qr(a);
    return qr.householderQ() * ComplexMatrix::Identity(a.rows(), a.cols());
}

// Factored retraction. Returns nothing when the (2k)-frame [U Q_u] or
// [V Q_v] is not orthonormal to kFactoredOrthTol, leaving the dense path
// to handle it.
std::optional<SvdFactors> retract_factored(const FixedRankPoint &x, const TangentVector &xi,
                                           double step) {
    const Index k = x.rank();
    const Index m = x.rows();
    const Index n = x.cols();
    if (2 * k > m || 2 * k > n)
        return std::nullopt;

    const ComplexMatrix &u = x.left();
    const ComplexMatrix &v = x.right();
    const ComplexMatrix up = xi.up - u * (u.adjoint() * xi.up);
    const ComplexMatrix vp = xi.vp - v * (v.adjoint() * xi.vp);

    const ComplexMatrix qu = orthonormal_basis(up);
    const ComplexMatrix qv = orthonormal_basis(vp);
    if ((u.adjoint() * qu).cwiseAbs().maxCoeff() > kFactoredOrthTol ||
        (v.adjoint() * qv).cwiseAbs().maxCoeff() > kFactoredOrthTol)
        return std::nullopt;
    const ComplexMatrix ru = qu.adjoint() * up;
    const ComplexMatrix rv = qv.adjoint() * vp;

    // x + t xi = [U Q_u] K [V Q_v]^H with K = [[S + t M, t R_v^H], [t R_u, 0]]
    ComplexMatrix core = ComplexMatrix::Zero(2 * k, 2 * k);
    core.topLeftCorner(k, k) = x.singular_values().cast<Complex>().asDiagonal();
    core.topLeftCorner(k, k) += step * xi.core;
    core.topRightCorner(k, k) = step * rv.adjoint();
    core.bottomLeftCorner(k, k) = step * ru;
    const SvdFactors small = truncated_svd(core, k);

    ComplexMatrix frame_u(m, 2 * k);
    frame_u << u, qu;
    ComplexMatrix frame_v(n, 2 * k);
    frame_v << v, qv;
    SvdFactors out{frame_u * small.left, small.singular_values, frame_v * small.right};
    if (orthonormality_error(out.left) > kFactoredOrthTol ||
        orthonormality_error(out.right) > kFactoredOrthTol)
        return std::nullopt;
    return out;
}

SvdFactors retract_once(const FixedRankPoint &x, const TangentVector &xi, double step) {
    if (auto factored = retract_factored(x, xi, step))
        return *std::move(factored);
    return truncated_svd(x.dense() + step * xi.dense(), x.rank());
}

} // namespace

FixedRankPoint::FixedRankPoint(SvdFactors factors) : f_(std::move(factors)) {
    const Index k = f_.singular_values.size();
    if (k < 1 || f_.left.cols() != k || f_.right.cols() != k)
        throw DimensionError("FixedRankPoint: factor shapes disagree with rank");
    if (k > f_.left.rows() || k > f_.right.rows())
        throw DimensionError("FixedRankPoint: rank exceeds ambient dimensions");
    if (rank_deficient(f_.singular_values))
        throw DegenerateRankError("FixedRankPoint: singular values not strictly positive");
    if (orthonormality_error(f_.left) > kOrthonormalTol ||
        orthonormality_error(f_.right) > kOrthonormalTol)
        throw ParameterError("FixedRankPoint: factors are not orthonormal");
}

bool FixedRankPoint::same_frame(const FixedRankPoint &other) const {
    if (this == &other)
        return true;
    return left().rows() == other.left().rows() && left().cols() == other.left().cols() &&
           right().rows() == other.right().rows() && left() == other.left() &&
           right() == other.right();
}

ComplexMatrix TangentVector::dense() const {
    const ComplexMatrix &u = base.left();
    const ComplexMatrix &v = base.right();
    return (u * core + up) * v.adjoint() + u * vp.adjoint();
}

TangentVector TangentVector::operator-() const { return {base, -core, -up, -vp}; }

TangentVector TangentVector::operator*(double alpha) const {
    return {base, alpha * core, alpha * up, alpha * vp};
}

TangentVector TangentVector::operator+(const TangentVector &other) const {
    check_same_frame(*this, other);
    return {base, core + other.core, up + other.up, vp + other.vp};
}

TangentVector TangentVector::operator-(const TangentVector &other) const {
    check_same_frame(*this, other);
    return {base, core - other.core, up - other.up, vp - other.vp};
}

FixedRankPoint from_dense(const ComplexMatrix &x, Index k) {
    SvdFactors f = truncated_svd(x, k);
    if (rank_deficient(f.singular_values))
        throw DegenerateRankError("from_dense: fewer than " + std::to_string(k) +
                                  " numerically nonzero singular values");
    return FixedRankPoint(std::move(f));
}

double inner(const ComplexMatrix &a, const ComplexMatrix &b) { return real_inner(a, b); }

double inner(const TangentVector &xi, const TangentVector &eta) {
    if (xi.base.rows() != eta.base.rows() || xi.base.cols() != eta.base.cols())
        throw DimensionError("inner: ambient dimensions differ");
    if (!xi.base.same_frame(eta.base))
        return real_inner(xi.dense(), eta.dense());
    // the three components are mutually orthogonal
    return real_inner(xi.core, eta.core) + real_inner(xi.up, eta.up) + real_inner(xi.vp, eta.vp);
}

TangentVector zero_tangent(const FixedRankPoint &x) {
    const Index k = x.rank();
    return {x, ComplexMatrix::Zero(k, k), ComplexMatrix::Zero(x.rows(), k),
            ComplexMatrix::Zero(x.cols(), k)};
}

TangentVector project(const FixedRankPoint &x, const ComplexMatrix &j) {
    if (j.rows() != x.rows() || j.cols() != x.cols())
        throw DimensionError("project: ambient " + std::to_string(j.rows()) + "x" +
                             std::to_string(j.cols()) + " does not match point " +
                             std::to_string(x.rows()) + "x" + std::to_string(x.cols()));
    const ComplexMatrix &u = x.left();
    const ComplexMatrix &v = x.right();
    const ComplexMatrix jv = j * v;
    const ComplexMatrix jhu = j.adjoint() * u;
    ComplexMatrix m = u.adjoint() * jv;
    ComplexMatrix up = jv - u * m;
    ComplexMatrix vp = jhu - v * m.adjoint();
    return {x, std::move(m), std::move(up), std::move(vp)};
}

FixedRankPoint retract(const FixedRankPoint &x, const TangentVector &xi, double step) {
    if (!(step >= 0.0))
        throw ParameterError("retract: step must be non-negative");
    if (xi.base.rows() != x.rows() || xi.base.cols() != x.cols() || xi.base.rank() != x.rank())
        throw DimensionError("retract: tangent vector is not anchored at a compatible point");
    if (step == 0.0)
        return x;

    SvdFactors f = retract_once(x, xi, step);
    if (!rank_deficient(f.singular_values))
        return FixedRankPoint(std::move(f));

    // Measure-zero event: nudge along a fixed pseudo-random tangent direction.
    std::clog << "irsest: retraction lost rank, perturbing and retrying\n";
    RngStream rng(0x5eedULL);
    const TangentVector nudge = project(x, complex_gaussian(x.rows(), x.cols(), 1.0, rng));
    const double nudge_norm = std::sqrt(inner(nudge, nudge));
    const double scale = nudge_norm > 0.0 ? 1e-12 * x.frobenius_norm() / nudge_norm : 0.0;
    const ComplexMatrix perturbed = x.dense() + step * xi.dense() + scale * nudge.dense();
    f = truncated_svd(perturbed, x.rank());
    if (rank_deficient(f.singular_values))
        throw DegenerateRankError("retract: update remains rank deficient after perturbation");
    return FixedRankPoint(std::move(f));
}

TangentVector transport(const FixedRankPoint &x_new, const TangentVector &xi) {
    if (xi.base.same_frame(x_new))
        return TangentVector{x_new, xi.core, xi.up, xi.vp};
    return project(x_new, xi.dense());
}

FixedRankPoint random_point(Index m, Index n, Index k, RngStream &rng) {
    if (k < 1 || k > std::min(m, n))
        throw ParameterError("random_point: rank " + std::to_string(k) + " out of range");
    for (int attempt = 0;; ++attempt) {
        const ComplexMatrix x = complex_gaussian(m, k, 1.0, rng) * complex_gaussian(k, n, 1.0, rng);
        try {
            return from_dense(x / x.norm(), k);
        } catch (const DegenerateRankError &) {
            if (attempt >= 8)
                throw;
        }
    }
}

} // namespace irsest
