// SPDX-License-Identifier: Apache-2.0
#include "freelab/montecarlo.hpp"

#include <cmath>
#include <numeric>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "freelab/errors.hpp"

namespace freelab {

std::vector<double> sampled_norms(const MatrixPoly& p, int m, int reps, Ensemble kind,
                                  const RandomSource& root, const SpectralConfig& cfg, Exec exec) {
    if (reps < 1) throw InvalidInput("reps must be >= 1");
    std::vector<double> norms(static_cast<std::size_t>(reps));
    for_each_task(
        norms.size(),
        [&](std::size_t r) {
            const auto family = sample_family(p.n(), m, root.stream("rep", r), kind);
            norms[r] = operator_norm(evaluate(p, family), cfg);
        },
        exec);
    return norms;
}

std::vector<std::vector<double>> sampled_moments(int m, int p_max, int reps, Ensemble kind,
                                                 const RandomSource& root, Exec exec) {
    if (reps < 1 || p_max < 1) throw InvalidInput("reps and p_max must be >= 1");
    std::vector<std::vector<double>> out(static_cast<std::size_t>(reps));
    for_each_task(
        out.size(),
        [&](std::size_t r) {
            RandomSource rng = root.stream("rep", r);
            const ComplexMatrix x = sample_matrix(kind, m, rng);
            const ComplexMatrix base = kind == Ensemble::gue ? ComplexMatrix(x * x) : ComplexMatrix(x.adjoint() * x);
            ComplexMatrix power = base;
            out[r].resize(static_cast<std::size_t>(p_max));
            for (int q = 1; q <= p_max; ++q) {
                if (q > 1) power = power * base;
                out[r][static_cast<std::size_t>(q - 1)] = power.trace().real() / m;
            }
        },
        exec);
    return out;
}

double mean(const std::vector<double>& values) {
    if (values.empty()) throw InvalidInput("mean of an empty sample");
    return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

double sample_stddev(const std::vector<double>& values) {
    if (values.size() < 2) throw InvalidInput("stddev needs at least two values");
    const double mu = mean(values);
    double ss = 0.0;
    for (double v : values) ss += (v - mu) * (v - mu);
    return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

void set_worker_count(int threads) {
#ifdef _OPENMP
    if (threads >= 1) omp_set_num_threads(threads);
#else
    (void)threads;
#endif
}

int worker_count() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

}  // namespace freelab
