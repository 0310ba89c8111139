// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "freelab/freeoracle.hpp"
#include "freelab/montecarlo.hpp"
#include "freelab/ncpoly.hpp"

namespace freelab {

// ---------------------------------------------------------------------------
// delta-nets

/// A norm on R^dim given as a callable.
using NormOracle = std::function<double(std::span<const double>)>;

struct NetSpec {
    int dim = 0;
    double delta = 0.0;
    std::vector<std::vector<double>> points;
    double max_probe_gap = 0.0;  ///< worst gap seen by the validation probes
    int probes = 0;

    /// (1 + 2/delta)^dim
    double cardinality_bound() const;
};

inline constexpr int kMaxNetDim = 12;

/// delta-net of the unit ball of `norm`. Lattice points of the ball (with
/// outside points pulled back radially) are pruned greedily to a
/// delta-separated set, which is then completed with random ball points
/// that are farther than delta from the net. Separation gives the
/// (1 + 2/delta)^dim cardinality bound for any norm. Coverage is validated
/// on `probes` fresh random points: a gap above 1.05 delta raises
/// NumericFailure. dim > kMaxNetDim raises BudgetExceeded.
NetSpec covering_net(int dim, double delta, const NormOracle& norm, std::uint64_t seed = 0, int probes = 10000);

/// Euclidean norm, the reference oracle for covering_net.
double euclidean_norm(std::span<const double> x);

/// (1 - delta)^{-1} sup_on_net: the sup of a seminorm over the unit ball
/// given its sup over a delta-net.
double net_lift(double sup_on_net, double delta);

/// Real coefficient vector (a_0, a_1, b_1) -> a_0 + a_1 X_1 + b_1 X_1*.
MatrixPoly degree_one_scalar_poly(std::span<const double> coeffs);

// ---------------------------------------------------------------------------
// chi_d(k, m) and C_d(m, t)

struct SearchOptions {
    int n = 1;                                 ///< generator count of the candidates
    CoeffStyle style = CoeffStyle::gaussian;   ///< candidate shape
    int max_hill_steps = 50;
    FreeNormOptions oracle{};                  ///< probe settings for degree > 1
    SpectralConfig spectral{};
    Exec exec = Exec::parallel;
};

struct ChiEstimate {
    int d = 0, k = 0, m = 0;
    double value = 0.0;
    MatrixPoly witness{1, 1, 0};  ///< scaled so that its upper enclosure is 1
    int reps = 0;
    int budget = 0;
    int evaluations = 0;
    bool heuristic_normalization = false;
};

struct CEstimate {
    int d = 0, m_low = 0, m_high = 0, t = 0;
    double value = 0.0;
    MatrixPoly witness{1, 1, 0};
    int witness_m = 0;
    int witness_k = 0;
    bool heuristic_normalization = false;
};

/// Number of hill-climbing steps spent out of `budget` evaluations; the rest
/// go to seeded random candidates. Both parts grow with the budget.
int hill_steps_for_budget(int budget, int max_hill_steps);

/// mean_r ||P(Y_r^(m))|| over `families` divided by the upper enclosure of
/// ||P(c)||. The flag reports whether that enclosure was heuristic.
std::pair<double, bool> normalized_mean_norm(const MatrixPoly& p, std::span<const std::vector<ComplexMatrix>> families,
                                             const SearchOptions& opt, const RandomSource& probe_rng);

/// Lower estimate of chi_d(k, m): seeded random candidates and coordinate
/// hill climbing from candidate 0, all scored on the same `reps` samples.
/// Estimates normalized by a sampled (heuristic) upper enclosure are
/// flagged, never reported as certified.
ChiEstimate estimate_chi(int d, int k, int m, int budget, int reps, const RandomSource& rng,
                         const SearchOptions& opt = {});

/// Lower estimate of the finite restriction of C_d(m_low, k_cap): for every
/// m' in {m_low, m_low + m_step, ...} <= m_high and k <= k_cap, a search
/// like estimate_chi over one fixed realization Y^(m'). Enlarging the grid
/// never lowers the value.
CEstimate estimate_C(int d, int m_low, int m_high, int k_cap, int budget, int reps, const RandomSource& rng,
                     const SearchOptions& opt = {}, int m_step = 100);

// ---------------------------------------------------------------------------
// Witness inequality and truncation fidelity

struct WitnessRow {
    int n = 0;
    double lhs = 0.0;  ///< sum_j tau(|c_j|^2) = n
    double rhs = 0.0;  ///< 2 (sum_{j<=n} ||u_j||^2)^{1/2}
    bool crossed = false;
};

struct WitnessTable {
    std::vector<WitnessRow> rows;
    std::vector<double> generator_norms;  ///< ||u_j|| = sup over blocks
    std::optional<int> first_crossing;
};

WitnessTable witness_experiment(int n_max, const std::vector<int>& block_sizes, const RandomSource& rng,
                                const SpectralConfig& cfg = {}, Exec exec = Exec::parallel);

struct FidelityRow {
    std::vector<double> norms;  ///< ||P(Y^(m))|| per grid point
    double max_norm = 0.0;
    double ratio = 0.0;         ///< max_norm / interval midpoint
    double lower_ratio = 0.0;   ///< interval lower / midpoint
    bool lower_consistent = false;  ///< ratio >= lower_ratio
};

struct FidelityReport {
    std::vector<FidelityRow> rows;
    double max_ratio = 0.0;
    double min_ratio = 0.0;
};

/// Compares sampled norms on `m_grid` with the free-limit enclosures.
/// Sample (i, m) comes from rng.stream("poly", i).stream("m", m).
FidelityReport truncation_fidelity(const std::vector<MatrixPoly>& polys, const std::vector<int>& m_grid,
                                   const std::vector<NormInterval>& intervals, const RandomSource& rng,
                                   FreeModel model = FreeModel::circular, const SpectralConfig& cfg = {},
                                   Exec exec = Exec::parallel);

}  // namespace freelab
