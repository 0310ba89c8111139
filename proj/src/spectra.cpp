// SPDX-License-Identifier: Apache-2.0
#include "freelab/spectra.hpp"

#include <cmath>
#include <string>

#include "freelab/errors.hpp"

namespace freelab {

namespace {

double dense_norm(const ComplexMatrix& a) {
    // Only the lower triangle of the smaller Gram matrix is formed; the
    // eigensolver reads nothing else.
    const bool tall = a.rows() >= a.cols();
    ComplexMatrix gram = ComplexMatrix::Zero(tall ? a.cols() : a.rows(), tall ? a.cols() : a.rows());
    if (tall)
        gram.selfadjointView<Eigen::Lower>().rankUpdate(a.adjoint());
    else
        gram.selfadjointView<Eigen::Lower>().rankUpdate(a);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(gram, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericFailure("Hermitian eigensolver failed");
    return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

// Applies the dilation [[0, A], [A*, 0]] to (top; bottom).
ComplexVector dilate(const ComplexMatrix& a, const ComplexVector& x) {
    const Eigen::Index r = a.rows(), c = a.cols();
    ComplexVector y(r + c);
    y.head(r) = a * x.tail(c);
    y.tail(c) = a.adjoint() * x.head(r);
    return y;
}

struct PowerResult {
    double value;
    double residual;
    bool converged;
};

// The dilation has eigenvalues +-sigma_i, so ||H x|| for a unit x converges
// to sigma_1 while x itself may oscillate between the two top eigenvectors.
PowerResult power_iterate(const ComplexMatrix& a, ComplexVector x, const SpectralConfig& cfg) {
    x.normalize();
    double prev = -1.0, prev_change = -1.0, value = 0.0, residual = 0.0;
    for (int it = 0; it < cfg.max_iters; ++it) {
        ComplexVector y = dilate(a, x);
        value = y.norm();
        if (value == 0.0) return {0.0, 0.0, true};
        const ComplexVector z = dilate(a, y / value);
        // ||H^2 x - s^2 x|| with s^2 the Rayleigh quotient of H^2.
        residual = (z * value - value * value * x).norm() / (value * value);
        x = y / value;
        if (prev >= 0.0) {
            const double change = std::abs(value - prev);
            const double q = prev_change > 0.0 ? change / prev_change : 1.0;
            const double tail = q < 1.0 ? change * q / (1.0 - q) : change;
            if (change <= cfg.iter_tol * value && tail <= cfg.iter_tol * value) return {value, residual, true};
            prev_change = change;
        }
        prev = value;
    }
    return {value, residual, false};
}

}  // namespace

double operator_norm_iterative(const ComplexMatrix& a, const SpectralConfig& cfg) {
    if (cfg.iter_tol <= 0.0 || cfg.max_iters < 1) throw InvalidInput("invalid spectral config");
    if (a.size() == 0) return 0.0;
    ComplexVector start = ComplexVector::Ones(a.rows() + a.cols());
    PowerResult res = power_iterate(a, start, cfg);
    // The start vector can miss the top singular pair; a column norm is a
    // certified lower bound, so falling below it signals that case.
    const double column_bound = a.colwise().norm().maxCoeff();
    if (res.converged && res.value < column_bound * (1.0 - 1e-12)) {
        start(0) += 1.0;
        res = power_iterate(a, start, cfg);
    }
    if (!res.converged)
        throw NumericFailure("power method did not converge in " + std::to_string(cfg.max_iters) +
                                 " iterations",
                             res.value, res.residual);
    return res.value;
}

double operator_norm(const ComplexMatrix& a, const SpectralConfig& cfg) {
    if (cfg.dense_cutoff < 1) throw InvalidInput("dense_cutoff must be >= 1");
    if (!a.allFinite()) throw InvalidInput("matrix has non-finite entries");
    if (a.size() == 0) return 0.0;
    if (std::max(a.rows(), a.cols()) <= cfg.dense_cutoff) return dense_norm(a);
    return operator_norm_iterative(a, cfg);
}

Complex normalized_trace(const ComplexMatrix& a) {
    if (a.rows() != a.cols() || a.rows() == 0) throw InvalidInput("normalized_trace needs a nonempty square matrix");
    return a.trace() / static_cast<double>(a.rows());
}

double block_sup_norm(const std::map<int, ComplexMatrix>& blocks, const SpectralConfig& cfg) {
    if (blocks.empty()) throw InvalidInput("block_sup_norm needs at least one block");
    double sup = 0.0;
    for (const auto& [m, block] : blocks) sup = std::max(sup, operator_norm(block, cfg));
    return sup;
}

double trace_moment(const ComplexMatrix& a, int p, bool star) {
    if (a.rows() != a.cols()) throw InvalidInput("trace_moment needs a square matrix");
    if (p < 1) throw InvalidInput("trace_moment needs p >= 1");
    ComplexMatrix base;
    if (star) {
        base = a.adjoint() * a;
    } else {
        if (!a.isApprox(a.adjoint(), 1e-12))
            throw InvalidInput("trace_moment with star = false needs a Hermitian matrix");
        base = a * a;
    }
    ComplexMatrix power = base;
    for (int i = 1; i < p; ++i) power = power * base;
    const Complex t = normalized_trace(power);
    const double scale = std::max(1.0, std::abs(t));
    if (std::abs(t.imag()) > 1e-10 * scale)
        throw NumericFailure("trace moment has imaginary residue " + std::to_string(t.imag()), t.real(),
                             t.imag());
    return t.real();
}

}  // namespace freelab
