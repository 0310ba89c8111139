// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>

#include "freelab/matrix.hpp"

namespace freelab {

struct SpectralConfig {
    int dense_cutoff = 2000;  ///< use the dense path when max(rows, cols) <= this
    double iter_tol = 1e-10;  ///< relative tolerance of the power method
    int max_iters = 10000;
};

/// Largest singular value. Dense path: top eigenvalue of the smaller Gram
/// matrix. Iterative path: power method on the Hermitian dilation
/// [[0, A], [A*, 0]] from the normalized all-ones vector. Throws
/// NumericFailure when the iteration does not settle within max_iters.
double operator_norm(const ComplexMatrix& a, const SpectralConfig& cfg = {});

/// Power-method path of operator_norm, exposed for testing.
double operator_norm_iterative(const ComplexMatrix& a, const SpectralConfig& cfg = {});

/// Trace divided by the dimension.
Complex normalized_trace(const ComplexMatrix& a);

/// sup over blocks of the operator norm.
double block_sup_norm(const std::map<int, ComplexMatrix>& blocks, const SpectralConfig& cfg = {});

/// Even moment tau(A^{2p}) of a Hermitian A (star = false) or
/// tau((A* A)^p) of any square A (star = true). Both agree on Hermitian A.
double trace_moment(const ComplexMatrix& a, int p, bool star);

}  // namespace freelab
