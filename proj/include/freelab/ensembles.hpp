// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <vector>

#include "freelab/matrix.hpp"
#include "freelab/rng.hpp"

namespace freelab {

enum class Ensemble {
    ginibre,  ///< i.i.d. complex Gaussian entries, E|Y_ij|^2 = 1/m
    gue,      ///< X = (Y + Y*)/sqrt(2) from one Ginibre draw
};

/// m x m Ginibre matrix: real and imaginary parts independent N(0, 1/(2m)).
ComplexMatrix sample_ginibre(int m, RandomSource& rng);

/// Exactly Hermitian GUE matrix sqrt(2) Re(Y) built from a fresh Ginibre
/// draw on the same stream.
ComplexMatrix sample_gue(int m, RandomSource& rng);

ComplexMatrix sample_matrix(Ensemble kind, int m, RandomSource& rng);

/// n independent matrices; matrix j is drawn from the child stream ("gen", j)
/// so families of different length share their common prefix.
std::vector<ComplexMatrix> sample_family(int n, int m, const RandomSource& rng,
                                         Ensemble kind = Ensemble::ginibre);

/// Finite truncation of the block direct sums u_j = (+)_{m in sizes} Y_j^(m).
struct BlockFamily {
    int n = 0;
    std::vector<int> sizes;
    std::map<int, std::vector<ComplexMatrix>> blocks;  ///< size m -> n matrices

    /// The blocks of generator j (0-based) keyed by size.
    std::map<int, ComplexMatrix> generator(int j) const;
};

/// Block m is drawn from the child stream ("block", m), so adding sizes never
/// changes existing blocks.
BlockFamily sample_block_family(const std::vector<int>& sizes, int n, const RandomSource& rng,
                                Ensemble kind = Ensemble::ginibre);

}  // namespace freelab
