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

#include "irsest/matrix_core.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace irsest {

namespace {

std::string shape(const ComplexMatrix &x) {
    return std::to_string(x.rows()) + "x" + std::to_string(x.cols());
}

SvdFactors svd_backend(const ComplexMatrix &x) {
    Eigen::BDCSVD<ComplexMatrix> svd(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
    return {svd.matrixU(), svd.singularValues(), svd.matrixV()};
}

} // namespace

ComplexMatrix SvdFactors::reconstruct() const {
    return left * singular_values.cast<Complex>().asDiagonal() * right.adjoint();
}

ComplexMatrix khatri_rao(const ComplexMatrix &a, const ComplexMatrix &c) {
    if (a.cols() != c.cols())
        throw DimensionError("khatri_rao: column mismatch " + shape(a) + " vs " + shape(c));
    const Index blocks = a.rows();
    const Index inner = c.rows();
    ComplexMatrix out(blocks * inner, a.cols());
    for (Index i = 0; i < a.cols(); ++i)
        for (Index b = 0; b < blocks; ++b)
            out.col(i).segment(b * inner, inner) = a(b, i) * c.col(i);
    return out;
}

ComplexMatrix dft_matrix(Index rows, Index cols) {
    if (rows < 1 || cols < 1)
        throw DimensionError("dft_matrix: empty shape");
    if (rows > cols)
        throw DimensionError("dft_matrix: rows (" + std::to_string(rows) +
                             ") exceed transform length (" + std::to_string(cols) + ")");
    ComplexMatrix out(rows, cols);
    for (Index b = 0; b < rows; ++b) {
        for (Index n = 0; n < cols; ++n) {
            // reduce the phase index exactly before going to floating point
            const Index k = (b * n) % cols;
            const double angle = -2.0 * std::numbers::pi * static_cast<double>(k) /
                                 static_cast<double>(cols);
            out(b, n) = std::polar(1.0, angle);
        }
    }
    return out;
}

SvdFactors thin_svd(const ComplexMatrix &x) {
    if (x.size() == 0)
        throw DimensionError("thin_svd: empty matrix");
    return svd_backend(x);
}

SvdFactors truncated_svd(const ComplexMatrix &x, Index k) {
    if (k < 1 || k > std::min(x.rows(), x.cols()))
        throw DimensionError("truncated_svd: rank " + std::to_string(k) + " out of range for " +
                             shape(x));
    SvdFactors full = svd_backend(x);
    return {full.left.leftCols(k), full.singular_values.head(k), full.right.leftCols(k)};
}

ComplexMatrix pseudo_inverse(const ComplexMatrix &x) {
    if (x.size() == 0)
        throw DimensionError("pseudo_inverse: empty matrix");
    if (x.rows() < x.cols())
        return pseudo_inverse(x.adjoint()).adjoint();

    // Tall case: x = Q R, pinv(x) = pinv(R) Q^H. The SVD then only sees an
    // n x n triangle, which matters for the (B N_r) x N_I designs.
    const Index n = x.cols();
    Eigen::HouseholderQR<ComplexMatrix> qr(x);
    const ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(x.rows(), n);
    const ComplexMatrix r = qr.matrixQR().topRows(n).triangularView<Eigen::Upper>();

    const SvdFactors svd = svd_backend(r);
    const double cutoff = kPinvRelTol * svd.singular_values(0);
    RealVector inv_s = RealVector::Zero(n);
    for (Index i = 0; i < n; ++i)
        if (svd.singular_values(i) > cutoff)
            inv_s(i) = 1.0 / svd.singular_values(i);
    return svd.right * inv_s.cast<Complex>().asDiagonal() * svd.left.adjoint() * q.adjoint();
}

ComplexMatrix pseudo_inverse_apply(const ComplexMatrix &x, const ComplexMatrix &b) {
    if (x.size() == 0)
        throw DimensionError("pseudo_inverse_apply: empty matrix");
    if (x.rows() != b.rows())
        throw DimensionError("pseudo_inverse_apply: shape mismatch " + shape(x) + " vs " + shape(b));
    if (x.rows() < x.cols())
        return pseudo_inverse(x) * b;

    // pinv(R) (Q^H b) without ever forming Q or pinv(x)
    const Index n = x.cols();
    Eigen::HouseholderQR<ComplexMatrix> qr(x);
    const ComplexMatrix qb = (qr.householderQ().adjoint() * b).topRows(n);
    const ComplexMatrix r = qr.matrixQR().topRows(n).triangularView<Eigen::Upper>();

    const SvdFactors svd = svd_backend(r);
    const double cutoff = kPinvRelTol * svd.singular_values(0);
    RealVector inv_s = RealVector::Zero(n);
    for (Index i = 0; i < n; ++i)
        if (svd.singular_values(i) > cutoff)
            inv_s(i) = 1.0 / svd.singular_values(i);
    return svd.right * (inv_s.cast<Complex>().asDiagonal() * (svd.left.adjoint() * qb));
}

ComplexMatrix complex_gaussian(Index rows, Index cols, double variance, RngStream &rng) {
    if (!(variance >= 0.0))
        throw ParameterError("complex_gaussian: negative variance");
    if (rows < 0 || cols < 0)
        throw DimensionError("complex_gaussian: negative shape");
    ComplexMatrix out(rows, cols);
    if (variance == 0.0) {
        out.setZero();
        return out;
    }
    const double scale = std::sqrt(variance / 2.0);
    for (Index j = 0; j < cols; ++j)
        for (Index i = 0; i < rows; ++i) {
            const double re = rng.standard_normal();
            const double im = rng.standard_normal();
            out(i, j) = Complex(scale * re, scale * im);
        }
    return out;
}

double real_inner(const ComplexMatrix &a, const ComplexMatrix &b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw DimensionError("inner: shape mismatch " + shape(a) + " vs " + shape(b));
    // Re tr(a^H b) = sum of Re(conj(a_ij) b_ij)
    return (a.array().conjugate() * b.array()).real().sum();
}

} // namespace irsest
