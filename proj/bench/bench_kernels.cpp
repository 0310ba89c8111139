// SPDX-License-Identifier: Apache-2.0
// Serial reference vs OpenMP kernels. Usage: bench_kernels [m] [reps]
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>

#include "freelab/freeoracle.hpp"
#include "freelab/montecarlo.hpp"
#include "freelab/suprema.hpp"

using namespace freelab;

namespace {

double seconds(const std::function<void()>& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void compare(const std::string& name, const std::function<double(Exec)>& kernel) {
    double serial_value = 0.0, parallel_value = 0.0;
    const double ts = seconds([&] { serial_value = kernel(Exec::serial); });
    const double tp = seconds([&] { parallel_value = kernel(Exec::parallel); });
    std::printf("%-22s serial %8.3fs  parallel %8.3fs  speedup %5.2fx  %s\n", name.c_str(), ts, tp, ts / tp,
                serial_value == parallel_value ? "identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
    const int m = argc > 1 ? std::atoi(argv[1]) : 200;
    const int reps = argc > 2 ? std::atoi(argv[2]) : 16;
    std::printf("workers: %d, m = %d, reps = %d\n", worker_count(), m, reps);
    const RandomSource root(7);
    const MatrixPoly p = random_polynomial(2, 2, 2, 11);

    compare("sampled_norms", [&](Exec e) {
        const auto v = sampled_norms(p, m, reps, Ensemble::ginibre, root, {}, e);
        return mean(v);
    });
    compare("sampled_moments", [&](Exec e) {
        const auto v = sampled_moments(m, 4, reps, Ensemble::gue, root, e);
        double s = 0.0;
        for (const auto& row : v) s += row.back();
        return s;
    });
    compare("witness_experiment", [&](Exec e) {
        std::vector<int> sizes;
        for (int s = 1; s <= 32; ++s) sizes.push_back(s);
        return witness_experiment(reps, sizes, root, {}, e).rows.back().rhs;
    });
    compare("estimate_chi", [&](Exec e) {
        SearchOptions opt;
        opt.exec = e;
        return estimate_chi(1, 2, m, 8, 4, root, opt).value;
    });
    return 0;
}
