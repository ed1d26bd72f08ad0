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

#ifndef IRSEST_MATRIX_CORE_HPP
#define IRSEST_MATRIX_CORE_HPP

#include <complex>

#include <Eigen/Dense>

#include "irsest/errors.hpp"
#include "irsest/rng.hpp"

namespace irsest {

using Index = Eigen::Index;
using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

/// Relative singular-value cutoff used by pseudo_inverse().
inline constexpr double kPinvRelTol = 1e-12;

/**
 * Thin SVD factors: left (m x k) and right (n x k) with orthonormal columns,
 * singular values non-increasing and non-negative.
 *
 * Signs/phases of singular vectors are whatever the backend returns; only
 * products of the factors are meaningful.
 */
struct SvdFactors {
    ComplexMatrix left;
    RealVector singular_values;
    ComplexMatrix right;

    Index rank() const { return singular_values.size(); }
    ComplexMatrix reconstruct() const;
};

/// Column-wise Kronecker product: column i of the result is a(:,i) (x) c(:,i).
ComplexMatrix khatri_rao(const ComplexMatrix &a, const ComplexMatrix &c);

/// First `rows` rows of the `cols`-point DFT matrix, entry (b, n) = exp(-j 2 pi b n / cols).
ComplexMatrix dft_matrix(Index rows, Index cols);

/// The k leading singular triplets of x.
SvdFactors truncated_svd(const ComplexMatrix &x, Index k);

/// All min(m, n) singular triplets of x.
SvdFactors thin_svd(const ComplexMatrix &x);

/// Moore-Penrose inverse; singular values below kPinvRelTol * sigma_max count as zero.
ComplexMatrix pseudo_inverse(const ComplexMatrix &x);

/// pseudo_inverse(x) * b, same cutoff, without materializing the inverse.
ComplexMatrix pseudo_inverse_apply(const ComplexMatrix &x, const ComplexMatrix &b);

/// i.i.d. CN(0, variance) entries, filled in column-major order.
ComplexMatrix complex_gaussian(Index rows, Index cols, double variance, RngStream &rng);

/// Re{tr(a^H b)}.
double real_inner(const ComplexMatrix &a, const ComplexMatrix &b);

} // namespace irsest

#endif
