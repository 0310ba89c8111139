// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <exception>
#include <vector>

#include "freelab/ensembles.hpp"
#include "freelab/ncpoly.hpp"
#include "freelab/rng.hpp"
#include "freelab/spectra.hpp"

namespace freelab {

/// Execution policy for the Monte-Carlo kernels. `serial` is the reference
/// implementation; `parallel` distributes independent tasks over OpenMP
/// threads. Both produce bit-identical results because every task draws from
/// a stream keyed by its index and writes only its own output slot.
enum class Exec { serial, parallel };

/// Runs fn(i) for i in [0, count). An exception thrown by any task is
/// rethrown after the loop; when several tasks throw, the lowest index wins.
template <class Fn>
void for_each_task(std::size_t count, Fn&& fn, Exec exec) {
    std::vector<std::exception_ptr> errors(count);
    if (exec == Exec::serial) {
        for (std::size_t i = 0; i < count; ++i) {
            try {
                fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    } else {
        const long long n = static_cast<long long>(count);
#pragma omp parallel for schedule(dynamic, 1)
        for (long long i = 0; i < n; ++i) {
            try {
                fn(static_cast<std::size_t>(i));
            } catch (...) {
                errors[static_cast<std::size_t>(i)] = std::current_exception();
            }
        }
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

/// ||P(Y_r)|| for r = 0..reps-1, where Y_r is a fresh family of P.n()
/// matrices of size m drawn from root.stream("rep", r).
std::vector<double> sampled_norms(const MatrixPoly& p, int m, int reps, Ensemble kind,
                                  const RandomSource& root, const SpectralConfig& cfg = {},
                                  Exec exec = Exec::parallel);

/// Normalized trace moments tau_m(X^{2p}) (GUE) or tau_m((Y*Y)^p)
/// (Ginibre) of one sample per rep, for every p in 1..p_max. Row r holds
/// the moments of rep r.
std::vector<std::vector<double>> sampled_moments(int m, int p_max, int reps, Ensemble kind,
                                                 const RandomSource& root, Exec exec = Exec::parallel);

double mean(const std::vector<double>& values);
double sample_stddev(const std::vector<double>& values);

/// Sets the OpenMP worker count (no-op without OpenMP).
void set_worker_count(int threads);
int worker_count();

}  // namespace freelab
