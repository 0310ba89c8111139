// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "freelab/montecarlo.hpp"
#include "freelab/ncpoly.hpp"

namespace freelab {

enum class FreeKind { circular, circular_star, semicircular };

/// One generator of a free family: c_j, c_j* or s_j.
struct FreeLetter {
    int index = 1;
    FreeKind kind = FreeKind::circular;
};

/// Which free family the letters of a MatrixPoly stand for. In the
/// semicircular model letter n+j is s_j* = s_j.
enum class FreeModel { circular, semicircular };

inline constexpr int kDefaultWordCap = 16;
inline constexpr std::uint64_t kDefaultMomentBudget = 10'000'000'000ull;

/// Number of non-crossing pairings of the positions of `word` in which every
/// pair joins equal indices and either pairs c_j with c_j* or s_j with s_j.
/// This is tau(word) for the normalization tau(c_j* c_j) = tau(s_j^2) = 1.
/// Throws BudgetExceeded when the word is longer than `max_length`.
std::uint64_t free_word_moment(std::span<const FreeLetter> word, int max_length = kDefaultWordCap);

std::vector<FreeLetter> free_letters(const Word& word, int n, FreeModel model);

/// (tau_k (x) tau)((P(c)* P(c))^q) for q = 1..p_max, in one pass.
///
/// The expansion of (P* P)^q into words is never materialized. Each factor
/// is a trie of its words; a path through the chained tries is one summand.
/// G(u, v) sums the k x k coefficient products of all paths u -> v weighted
/// by their free moment, and satisfies
///   G(u, v) = [u = v] I + a_u G(next root, v)
///             + sum over letter edges u -l-> u', w -l'-> w' with l ~ l'
///               of G(u', w) G(w', v)
/// by pairing the first letter of the path with its partner. Work grows
/// polynomially in the number of states; `budget` caps the complex
/// multiply-adds.
std::vector<double> poly_star_moments(const MatrixPoly& p, int p_max, FreeModel model = FreeModel::circular,
                                      std::uint64_t budget = kDefaultMomentBudget);

double poly_star_moment(const MatrixPoly& p, int q, FreeModel model = FreeModel::circular,
                        std::uint64_t budget = kDefaultMomentBudget);

/// poly_star_moment(p, q)^(1/(2q)), a lower bound for ||P(c)||.
double norm_lower_bound(const MatrixPoly& p, int q, FreeModel model = FreeModel::circular,
                        std::uint64_t budget = kDefaultMomentBudget);

/// 2 max(||sum a_j a_j*||^(1/2), ||sum a_j* a_j||^(1/2)), an upper bound for
/// ||sum a_j (x) c_j|| over a free circular (or semicircular) family.
double degree_one_upper_bound(std::span<const ComplexMatrix> coeffs);

/// Certified upper bound for ||P(c)|| when degree(P) <= 1: the constant
/// term's norm plus the degree-one bound after rewriting a c_j + b c_j* over
/// the semicircular pair behind c_j. Empty for higher degree.
std::optional<double> certified_upper_bound(const MatrixPoly& p, FreeModel model = FreeModel::circular);

/// Enclosure of ||P(c)||. `lower` is certified. `upper` is certified only
/// when upper_certified is set; otherwise it is (1 + margin) times the mean
/// sampled norm at probe_m, which is exact only in the m -> infinity limit.
/// `upper` is never reported below `lower`.
struct NormInterval {
    double lower = 0.0;
    double upper = 0.0;
    int p_used = 0;
    int probe_m = 0;
    bool upper_certified = false;

    double midpoint() const { return 0.5 * (lower + upper); }
    bool contains(double x) const { return lower <= x && x <= upper; }
};

struct FreeNormOptions {
    int p_max = 8;
    int probe_m = 400;
    int reps = 4;
    double margin = 0.1;
    FreeModel model = FreeModel::circular;
    std::uint64_t budget = kDefaultMomentBudget;
    SpectralConfig spectral{};
    Exec exec = Exec::parallel;
};

/// (1 + margin) times the mean of ||P(Y^(probe_m))|| over `reps` samples
/// (Ginibre for the circular model, GUE for the semicircular one).
double sampled_upper_bound(const MatrixPoly& p, const FreeNormOptions& opt, const RandomSource& rng);

/// Best available upper bound: certified when degree <= 1 and smaller than
/// the sampled one. Returns {value, certified}.
std::pair<double, bool> best_upper_bound(const MatrixPoly& p, const FreeNormOptions& opt,
                                         const RandomSource& rng);

NormInterval free_norm_estimate(const MatrixPoly& p, const FreeNormOptions& opt, const RandomSource& rng);

}  // namespace freelab
