// SPDX-License-Identifier: Apache-2.0
#include "freelab/suprema.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "freelab/errors.hpp"
#include "freelab/spectra.hpp"

namespace freelab {

namespace {

std::vector<double> ball_point(int dim, const NormOracle& norm, RandomSource& rng) {
    std::vector<double> x(static_cast<std::size_t>(dim));
    double len = 0.0;
    do {
        for (auto& v : x) v = rng.normal();
        len = norm(x);
    } while (!(len > 0.0));
    const double radius = std::pow(rng.uniform(), 1.0 / dim);
    for (auto& v : x) v *= radius / len;
    return x;
}

double gap_to(const std::vector<std::vector<double>>& net, std::span<const double> x, const NormOracle& norm,
              std::vector<double>& scratch) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& y : net) {
        for (std::size_t i = 0; i < x.size(); ++i) scratch[i] = x[i] - y[i];
        best = std::min(best, norm(scratch));
    }
    return best;
}

ComplexMatrix gaussian_matrix(int k, RandomSource& rng) {
    const double s = std::sqrt(0.5);
    ComplexMatrix a(k, k);
    for (int c = 0; c < k; ++c)
        for (int r = 0; r < k; ++r) {
            const double re = rng.normal(s);
            const double im = rng.normal(s);
            a(r, c) = Complex(re, im);
        }
    return a;
}

std::uint64_t derived_seed(const RandomSource& rng) {
    RandomSource copy = rng;
    return copy.engine()();
}

Ensemble ensemble_for(FreeModel model) {
    return model == FreeModel::circular ? Ensemble::ginibre : Ensemble::gue;
}

struct Scored {
    double ratio = -1.0;
    double upper = 1.0;
    bool heuristic = false;
};

// Upper enclosure used to normalize candidates: certified whenever the
// degree allows it, sampled otherwise.
std::pair<double, bool> search_upper(const MatrixPoly& p, const SearchOptions& opt, const RandomSource& probe_rng) {
    if (auto certified = certified_upper_bound(p, opt.oracle.model)) return {*certified, false};
    return {sampled_upper_bound(p, opt.oracle, probe_rng), true};
}

// Seeded random candidates followed by hill climbing from candidate 0.
struct SearchResult {
    double value = -1.0;
    MatrixPoly witness{1, 1, 0};
    bool heuristic = false;
    int evaluations = 0;
};

template <class Score, class Candidate, class Perturb>
SearchResult run_search(int budget, int max_hill_steps, Score&& score, Candidate&& candidate, Perturb&& perturb) {
    const int hill = hill_steps_for_budget(budget, max_hill_steps);
    const int random_count = budget - hill;
    SearchResult out;
    auto consider = [&](const MatrixPoly& p, const Scored& s) {
        ++out.evaluations;
        out.heuristic = out.heuristic || s.heuristic;
        if (s.ratio > out.value) {
            out.value = s.ratio;
            out.witness = (1.0 / s.upper) * p;
        }
    };
    std::optional<MatrixPoly> start;
    Scored start_score;
    for (int i = 0; i < random_count; ++i) {
        MatrixPoly p = candidate(i);
        const Scored s = score(p, i, -1);
        consider(p, s);
        if (i == 0) {
            start = p;
            start_score = s;
        }
    }
    double step = 1.0;
    for (int t = 0; t < hill && start; ++t) {
        MatrixPoly trial = perturb(*start, t, step);
        const Scored s = score(trial, -1, t);
        consider(trial, s);
        if (s.ratio > start_score.ratio) {
            start = std::move(trial);
            start_score = s;
        } else {
            step *= 0.5;
        }
    }
    return out;
}

double mean_sampled_norm(const MatrixPoly& p, std::span<const std::vector<ComplexMatrix>> families,
                         const SearchOptions& opt) {
    if (families.empty()) throw InvalidInput("need at least one sampled family");
    std::vector<double> norms(families.size());
    for_each_task(
        norms.size(), [&](std::size_t r) { norms[r] = operator_norm(evaluate(p, families[r]), opt.spectral); },
        opt.exec);
    return mean(norms);
}

void check_search_args(int d, int k, int budget, int reps, const SearchOptions& opt) {
    if (d < 0 || k < 1 || budget < 1 || reps < 1 || opt.n < 1 || opt.max_hill_steps < 0)
        throw InvalidInput("search needs d >= 0, k >= 1, budget >= 1, reps >= 1, n >= 1");
}

}  // namespace

double NetSpec::cardinality_bound() const { return std::pow(1.0 + 2.0 / delta, dim); }

double euclidean_norm(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
}

NetSpec covering_net(int dim, double delta, const NormOracle& norm, std::uint64_t seed, int probes) {
    if (dim < 1) throw InvalidInput("net dimension must be >= 1");
    if (dim > kMaxNetDim)
        throw BudgetExceeded("net dimension " + std::to_string(dim) + " exceeds cap " + std::to_string(kMaxNetDim));
    if (!(delta > 0.0) || delta > 1.0) throw InvalidInput("delta must lie in (0, 1]");
    if (probes < 1) throw InvalidInput("probes must be >= 1");

    NetSpec net;
    net.dim = dim;
    net.delta = delta;
    std::vector<double> scratch(static_cast<std::size_t>(dim));

    std::vector<double> unit_norms(static_cast<std::size_t>(dim));
    double sum_units = 0.0;
    for (int i = 0; i < dim; ++i) {
        std::vector<double> e(static_cast<std::size_t>(dim), 0.0);
        e[static_cast<std::size_t>(i)] = 1.0;
        unit_norms[static_cast<std::size_t>(i)] = norm(e);
        if (!(unit_norms[static_cast<std::size_t>(i)] > 0.0)) throw InvalidInput("norm oracle vanishes on a basis vector");
        sum_units += unit_norms[static_cast<std::size_t>(i)];
    }

    // Lattice of spacing h has covering radius <= h/2 * sum ||e_i|| = delta/2.
    const double h = delta / sum_units;
    std::vector<int> half(static_cast<std::size_t>(dim));
    double lattice_size = 1.0;
    for (int i = 0; i < dim; ++i) {
        half[static_cast<std::size_t>(i)] = static_cast<int>(std::floor(1.0 / (unit_norms[static_cast<std::size_t>(i)] * h) + 1e-9));
        lattice_size *= 2.0 * half[static_cast<std::size_t>(i)] + 1.0;
    }
    auto add_if_separated = [&](const std::vector<double>& x, double threshold, bool strict) {
        const double gap = gap_to(net.points, x, norm, scratch);
        if (strict ? gap > threshold : gap >= threshold) {
            net.points.push_back(x);
            return true;
        }
        return false;
    };
    if (lattice_size <= 2e5) {
        std::vector<int> idx(half.size());
        for (int i = 0; i < dim; ++i) idx[static_cast<std::size_t>(i)] = -half[static_cast<std::size_t>(i)];
        std::vector<double> x(static_cast<std::size_t>(dim));
        while (true) {
            for (int i = 0; i < dim; ++i) x[static_cast<std::size_t>(i)] = idx[static_cast<std::size_t>(i)] * h;
            const double len = norm(x);
            if (len > 1.0)
                for (auto& v : x) v /= len;
            add_if_separated(x, delta, false);
            int axis = dim - 1;
            while (axis >= 0 && idx[static_cast<std::size_t>(axis)] == half[static_cast<std::size_t>(axis)]) {
                idx[static_cast<std::size_t>(axis)] = -half[static_cast<std::size_t>(axis)];
                --axis;
            }
            if (axis < 0) break;
            ++idx[static_cast<std::size_t>(axis)];
        }
    }

    // Completion: any ball point farther than delta from the net joins it,
    // which keeps the net delta-separated.
    RandomSource fill = RandomSource(seed).stream("net_fill", 0);
    const int quiet_needed = std::max(2000, probes);
    int quiet = 0;
    for (long draws = 0; quiet < quiet_needed && draws < 4'000'000; ++draws) {
        const auto x = ball_point(dim, norm, fill);
        if (add_if_separated(x, delta, true))
            quiet = 0;
        else
            ++quiet;
    }

    RandomSource probe = RandomSource(seed).stream("net_probe", 0);
    for (int i = 0; i < probes; ++i) {
        const auto x = ball_point(dim, norm, probe);
        net.max_probe_gap = std::max(net.max_probe_gap, gap_to(net.points, x, norm, scratch));
    }
    net.probes = probes;
    if (net.max_probe_gap > 1.05 * delta)
        throw NumericFailure("net coverage check failed: probe gap " + std::to_string(net.max_probe_gap) +
                                 " exceeds 1.05 delta",
                             net.max_probe_gap, delta);
    return net;
}

double net_lift(double sup_on_net, double delta) {
    if (!(delta >= 0.0) || delta >= 1.0) throw InvalidInput("net_lift needs 0 <= delta < 1");
    return sup_on_net / (1.0 - delta);
}

MatrixPoly degree_one_scalar_poly(std::span<const double> coeffs) {
    if (coeffs.size() != 3) throw InvalidInput("expected (a0, a1, b1)");
    MatrixPoly p(1, 1, 1);
    p.add_term({}, ComplexMatrix::Constant(1, 1, coeffs[0]));
    p.add_term({1}, ComplexMatrix::Constant(1, 1, coeffs[1]));
    p.add_term({2}, ComplexMatrix::Constant(1, 1, coeffs[2]));
    return p;
}

int hill_steps_for_budget(int budget, int max_hill_steps) {
    if (budget < 1) return 0;
    return std::min(max_hill_steps, (budget - 1) / 2);
}

std::pair<double, bool> normalized_mean_norm(const MatrixPoly& p, std::span<const std::vector<ComplexMatrix>> families,
                                             const SearchOptions& opt, const RandomSource& probe_rng) {
    const auto [upper, heuristic] = search_upper(p, opt, probe_rng);
    return {mean_sampled_norm(p, families, opt) / upper, heuristic};
}

ChiEstimate estimate_chi(int d, int k, int m, int budget, int reps, const RandomSource& rng, const SearchOptions& opt) {
    check_search_args(d, k, budget, reps, opt);
    const Ensemble kind = ensemble_for(opt.oracle.model);
    const RandomSource sample_root = rng.stream("chi_sample", static_cast<std::uint64_t>(m));
    std::vector<std::vector<ComplexMatrix>> families(static_cast<std::size_t>(reps));
    for_each_task(
        families.size(),
        [&](std::size_t r) { families[r] = sample_family(opt.n, m, sample_root.stream("rep", r), kind); }, opt.exec);

    const RandomSource cand_root = rng.stream("candidate", static_cast<std::uint64_t>(k));
    const auto words = all_words(opt.n, d);
    auto score = [&](const MatrixPoly& p, int i, int t) {
        const RandomSource probe = i >= 0 ? cand_root.stream("probe_candidate", static_cast<std::uint64_t>(i))
                                          : cand_root.stream("probe_hill", static_cast<std::uint64_t>(t));
        const auto [upper, heuristic] = search_upper(p, opt, probe);
        Scored s;
        s.upper = upper;
        s.heuristic = heuristic;
        s.ratio = mean_sampled_norm(p, families, opt) / upper;
        return s;
    };
    auto candidate = [&](int i) {
        return random_polynomial(opt.n, d, k, derived_seed(cand_root.stream("i", static_cast<std::uint64_t>(i))),
                                 opt.style);
    };
    auto perturb = [&](const MatrixPoly& p, int t, double step) {
        RandomSource r = cand_root.stream("hill", static_cast<std::uint64_t>(t));
        MatrixPoly q = p;
        q.add_term(words[static_cast<std::size_t>(t) % words.size()], step * gaussian_matrix(k, r));
        return q;
    };
    const SearchResult res = run_search(budget, opt.max_hill_steps, score, candidate, perturb);

    ChiEstimate out;
    out.d = d;
    out.k = k;
    out.m = m;
    out.value = res.value;
    out.witness = res.witness;
    out.reps = reps;
    out.budget = budget;
    out.evaluations = res.evaluations;
    out.heuristic_normalization = res.heuristic;
    return out;
}

CEstimate estimate_C(int d, int m_low, int m_high, int k_cap, int budget, int reps, const RandomSource& rng,
                     const SearchOptions& opt, int m_step) {
    check_search_args(d, k_cap, budget, reps, opt);
    if (m_low < 1 || m_high < m_low || m_step < 1)
        throw InvalidInput("estimate_C needs 1 <= m_low <= m_high and m_step >= 1");
    SearchOptions probe_opt = opt;
    probe_opt.oracle.reps = reps;
    const Ensemble kind = ensemble_for(opt.oracle.model);
    const auto words = all_words(opt.n, d);

    // Upper enclosures depend only on the candidate, so they are shared by
    // every grid point.
    std::map<std::pair<int, int>, std::pair<double, bool>> upper_cache;
    auto candidate_for = [&](int k, int i) {
        const RandomSource root = rng.stream("candidate", static_cast<std::uint64_t>(k));
        return random_polynomial(opt.n, d, k, derived_seed(root.stream("i", static_cast<std::uint64_t>(i))), opt.style);
    };

    CEstimate out;
    out.d = d;
    out.m_low = m_low;
    out.m_high = m_high;
    out.t = k_cap;
    out.value = -1.0;
    for (int mp = m_low; mp <= m_high; mp += m_step) {
        const auto family =
            sample_family(opt.n, mp, rng.stream("C_sample", static_cast<std::uint64_t>(mp)), kind);
        for (int k = 1; k <= k_cap; ++k) {
            const RandomSource cand_root = rng.stream("candidate", static_cast<std::uint64_t>(k));
            const RandomSource hill_root =
                rng.stream("C_hill", static_cast<std::uint64_t>(mp)).stream("k", static_cast<std::uint64_t>(k));
            auto score = [&](const MatrixPoly& p, int i, int t) {
                std::pair<double, bool> up;
                if (i >= 0) {
                    auto key = std::make_pair(k, i);
                    auto it = upper_cache.find(key);
                    if (it == upper_cache.end())
                        it = upper_cache
                                 .emplace(key, search_upper(p, probe_opt,
                                                            cand_root.stream("probe_candidate", static_cast<std::uint64_t>(i))))
                                 .first;
                    up = it->second;
                } else {
                    up = search_upper(p, probe_opt, hill_root.stream("probe_hill", static_cast<std::uint64_t>(t)));
                }
                Scored s;
                s.upper = up.first;
                s.heuristic = up.second;
                s.ratio = operator_norm(evaluate(p, family), opt.spectral) / up.first;
                return s;
            };
            auto candidate = [&](int i) { return candidate_for(k, i); };
            auto perturb = [&](const MatrixPoly& p, int t, double step) {
                RandomSource r = hill_root.stream("step", static_cast<std::uint64_t>(t));
                MatrixPoly q = p;
                q.add_term(words[static_cast<std::size_t>(t) % words.size()], step * gaussian_matrix(k, r));
                return q;
            };
            const SearchResult res = run_search(budget, opt.max_hill_steps, score, candidate, perturb);
            out.heuristic_normalization = out.heuristic_normalization || res.heuristic;
            if (res.value > out.value) {
                out.value = res.value;
                out.witness = res.witness;
                out.witness_m = mp;
                out.witness_k = k;
            }
        }
    }
    return out;
}

WitnessTable witness_experiment(int n_max, const std::vector<int>& block_sizes, const RandomSource& rng,
                                const SpectralConfig& cfg, Exec exec) {
    if (n_max < 1) throw InvalidInput("n_max must be >= 1");
    const BlockFamily family = sample_block_family(block_sizes, n_max, rng);
    WitnessTable table;
    table.generator_norms.resize(static_cast<std::size_t>(n_max));
    for_each_task(
        table.generator_norms.size(),
        [&](std::size_t j) { table.generator_norms[j] = block_sup_norm(family.generator(static_cast<int>(j)), cfg); },
        exec);
    double sum_sq = 0.0;
    for (int n = 1; n <= n_max; ++n) {
        const double norm_j = table.generator_norms[static_cast<std::size_t>(n - 1)];
        sum_sq += norm_j * norm_j;
        WitnessRow row;
        row.n = n;
        row.lhs = static_cast<double>(n);
        row.rhs = 2.0 * std::sqrt(sum_sq);
        row.crossed = row.lhs > row.rhs;
        if (row.crossed && !table.first_crossing) table.first_crossing = n;
        table.rows.push_back(row);
    }
    return table;
}

FidelityReport truncation_fidelity(const std::vector<MatrixPoly>& polys, const std::vector<int>& m_grid,
                                   const std::vector<NormInterval>& intervals, const RandomSource& rng,
                                   FreeModel model, const SpectralConfig& cfg, Exec exec) {
    if (polys.size() != intervals.size()) throw InvalidInput("polys and intervals must align");
    if (m_grid.empty()) throw InvalidInput("m grid must be nonempty");
    for (const auto& iv : intervals)
        if (iv.upper < iv.lower || !(iv.upper > 0.0)) throw InvalidInput("degenerate norm interval");
    const Ensemble kind = ensemble_for(model);
    const std::size_t cols = m_grid.size();
    std::vector<double> norms(polys.size() * cols);
    for_each_task(
        norms.size(),
        [&](std::size_t task) {
            const std::size_t i = task / cols;
            const int m = m_grid[task % cols];
            const auto family = sample_family(polys[i].n(), m,
                                              rng.stream("poly", i).stream("m", static_cast<std::uint64_t>(m)), kind);
            norms[task] = operator_norm(evaluate(polys[i], family), cfg);
        },
        exec);

    FidelityReport report;
    report.max_ratio = -std::numeric_limits<double>::infinity();
    report.min_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < polys.size(); ++i) {
        FidelityRow row;
        row.norms.assign(norms.begin() + static_cast<long>(i * cols), norms.begin() + static_cast<long>((i + 1) * cols));
        row.max_norm = *std::max_element(row.norms.begin(), row.norms.end());
        const double mid = intervals[i].midpoint();
        row.ratio = row.max_norm / mid;
        row.lower_ratio = intervals[i].lower / mid;
        row.lower_consistent = row.ratio >= row.lower_ratio;
        report.max_ratio = std::max(report.max_ratio, row.ratio);
        report.min_ratio = std::min(report.min_ratio, row.ratio);
        report.rows.push_back(std::move(row));
    }
    return report;
}

}  // namespace freelab
