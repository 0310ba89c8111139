// SPDX-License-Identifier: Apache-2.0
#include "freelab/ensembles.hpp"

#include <cmath>
#include <string>

#include "freelab/errors.hpp"

namespace freelab {

ComplexMatrix sample_ginibre(int m, RandomSource& rng) {
    if (m < 1) throw InvalidInput("matrix size must be >= 1, got " + std::to_string(m));
    const double s = std::sqrt(0.5 / m);
    ComplexMatrix y(m, m);
    for (int c = 0; c < m; ++c)
        for (int r = 0; r < m; ++r) {
            const double re = rng.normal(s);
            const double im = rng.normal(s);
            y(r, c) = Complex(re, im);
        }
    return y;
}

ComplexMatrix sample_gue(int m, RandomSource& rng) {
    const ComplexMatrix y = sample_ginibre(m, rng);
    const double scale = 1.0 / std::sqrt(2.0);
    ComplexMatrix x(m, m);
    for (int c = 0; c < m; ++c) {
        x(c, c) = Complex(std::sqrt(2.0) * y(c, c).real(), 0.0);
        for (int r = 0; r < c; ++r) {
            x(r, c) = scale * (y(r, c) + std::conj(y(c, r)));
            x(c, r) = std::conj(x(r, c));
        }
    }
    return x;
}

ComplexMatrix sample_matrix(Ensemble kind, int m, RandomSource& rng) {
    return kind == Ensemble::gue ? sample_gue(m, rng) : sample_ginibre(m, rng);
}

std::vector<ComplexMatrix> sample_family(int n, int m, const RandomSource& rng, Ensemble kind) {
    if (n < 1 || m < 1) throw InvalidInput("sample_family needs n >= 1 and m >= 1");
    std::vector<ComplexMatrix> family;
    family.reserve(n);
    for (int j = 0; j < n; ++j) {
        RandomSource child = rng.stream("gen", static_cast<std::uint64_t>(j));
        family.push_back(sample_matrix(kind, m, child));
    }
    return family;
}

std::map<int, ComplexMatrix> BlockFamily::generator(int j) const {
    std::map<int, ComplexMatrix> out;
    for (const auto& [m, mats] : blocks) out.emplace(m, mats.at(j));
    return out;
}

BlockFamily sample_block_family(const std::vector<int>& sizes, int n, const RandomSource& rng,
                                Ensemble kind) {
    if (sizes.empty()) throw InvalidInput("block sizes must be nonempty");
    if (n < 1) throw InvalidInput("generator count must be >= 1");
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        if (sizes[i] < 1) throw InvalidInput("block sizes must be positive");
        if (i > 0 && sizes[i] <= sizes[i - 1])
            throw InvalidInput("block sizes must be strictly increasing");
    }
    BlockFamily family;
    family.n = n;
    family.sizes = sizes;
    for (int m : sizes)
        family.blocks.emplace(m, sample_family(n, m, rng.stream("block", static_cast<std::uint64_t>(m)), kind));
    return family;
}

}  // namespace freelab
