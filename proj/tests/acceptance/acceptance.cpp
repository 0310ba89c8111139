// Acceptance suite: one PASS/FAIL line per criterion. A criterion passes
// only when its check holds and it finishes inside its time limit.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>

#include "freelab/concentration.hpp"
#include "freelab/freeoracle.hpp"
#include "freelab/lab/config.hpp"
#include "freelab/lab/emit.hpp"
#include "freelab/lab/experiments.hpp"
#include "freelab/montecarlo.hpp"
#include "freelab/spectra.hpp"
#include "freelab/suprema.hpp"
#include "../oracles.hpp"

using namespace freelab;

namespace {

constexpr std::uint64_t kSeed = 42;

struct Outcome {
    bool ok = false;
    std::string detail;
};

int failures = 0;

void criterion(int id, const char* title, double limit_seconds, const std::function<Outcome()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
        out = body();
    } catch (const std::exception& e) {
        out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs < limit_seconds;
    const bool pass = out.ok && in_time;
    if (!pass) ++failures;
    std::printf("%s criterion %d: %s | %s | %.1fs (limit %.0fs)%s\n", pass ? "PASS" : "FAIL", id, title,
                out.detail.c_str(), secs, limit_seconds, in_time ? "" : " TIMEOUT");
    std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

MatrixPoly scalar_sum(int n) {
    MatrixPoly p(n, 1, 1);
    for (int j = 1; j <= n; ++j) p.add_term({j}, ComplexMatrix::Constant(1, 1, 1.0));
    return p;
}

}  // namespace

int main() {
    const RandomSource root(kSeed);

    criterion(1, "mean norm of 20 samples at m=400 in [1.95, 2.15]", 60, [&] {
        const auto x = MatrixPoly::monomial(1, 1, {1}, ComplexMatrix::Constant(1, 1, 1.0));
        const double gue = mean(sampled_norms(x, 400, 20, Ensemble::gue, root.stream("c1_gue", 0)));
        const double gin = mean(sampled_norms(x, 400, 20, Ensemble::ginibre, root.stream("c1_ginibre", 0)));
        const bool ok = gue >= 1.95 && gue <= 2.15 && gin >= 1.95 && gin <= 2.15;
        return Outcome{ok, fmt("GUE %.4f", gue) + fmt(", Ginibre %.4f", gin)};
    });

    criterion(2, "single GUE sample at m=400: |tau(X^2p) - C_p| <= 0.15, p=1..4", 60, [&] {
        const auto moments = sampled_moments(400, 4, 1, Ensemble::gue, root.stream("c2", 0));
        bool ok = true;
        std::string detail;
        for (int p = 1; p <= 4; ++p) {
            const double err = std::abs(moments[0][p - 1] - static_cast<double>(oracle::kCatalan[p]));
            ok = ok && err <= 0.15;
            detail += "p=" + std::to_string(p) + fmt(" err %.4f  ", err);
        }
        return Outcome{ok, detail};
    });

    criterion(3, "free_word_moment equals exhaustive pairings (len<=8, n<=2); tau((c*c)^p)=C_p, p<=6", 60, [&] {
        std::size_t words = 0, mismatches = 0;
        for (int n = 1; n <= 2; ++n)
            for (bool semi : {false, true})
                for (int len = 0; len <= 8; ++len)
                    for (const auto& w : oracle::all_free_words(n, len, semi)) {
                        ++words;
                        if (free_word_moment(w) != oracle::brute_moment(w)) ++mismatches;
                    }
        const auto c = MatrixPoly::monomial(1, 1, {1}, ComplexMatrix::Constant(1, 1, 1.0));
        const auto moments = poly_star_moments(c, 6);
        bool catalan = true;
        for (int p = 1; p <= 6; ++p) {
            std::vector<FreeLetter> w;
            for (int i = 0; i < p; ++i) {
                w.push_back({1, FreeKind::circular_star});
                w.push_back({1, FreeKind::circular});
            }
            catalan = catalan && free_word_moment(w) == oracle::kCatalan[p] &&
                      moments[p - 1] == static_cast<double>(oracle::kCatalan[p]);
        }
        return Outcome{mismatches == 0 && catalan,
                       std::to_string(words) + " words, " + std::to_string(mismatches) + " mismatches, Catalan " +
                           (catalan ? "exact" : "WRONG")};
    });

    criterion(4, "P=c1+c2: interval contains 2sqrt2; sampled m=1000 within 5%; certified bound = 2sqrt2", 300, [&] {
        const double target = 2.0 * std::sqrt(2.0);
        const auto p = scalar_sum(2);
        FreeNormOptions opt;
        opt.probe_m = 1000;
        opt.reps = 2;
        const auto iv = free_norm_estimate(p, opt, root.stream("c4_oracle", 0));
        const auto fam = sample_family(2, 1000, root.stream("c4_sample", 0));
        const double sampled = operator_norm(evaluate(p, fam));
        const std::vector<ComplexMatrix> coeffs(2, ComplexMatrix::Constant(1, 1, 1.0));
        const double bound = degree_one_upper_bound(coeffs);
        const double cert = *certified_upper_bound(p);
        const bool ok = iv.contains(target) && std::abs(sampled / target - 1.0) <= 0.05 &&
                        std::abs(bound - target) <= 1e-12 && std::abs(cert - target) <= 1e-12;
        return Outcome{ok, fmt("interval [%.4f, ", iv.lower) + fmt("%.4f]", iv.upper) +
                               fmt(", sampled %.4f", sampled) + fmt(", bound-2sqrt2 %.1e", bound - target)};
    });

    criterion(5, "2x2 trick: | ||P^(Y)|| - ||P(Y)|| | <= 1e-8 on 50 instances (n,d,k<=3, m=50)", 120, [&] {
        RandomSource pick = root.stream("c5", 0);
        double worst = 0.0;
        for (int i = 0; i < 50; ++i) {
            const int n = 1 + static_cast<int>(pick.engine()() % 3);
            const int d = 1 + static_cast<int>(pick.engine()() % 3);
            const int k = 1 + static_cast<int>(pick.engine()() % 3);
            const auto p = random_polynomial(n, d, k, pick.engine()());
            const auto fam = sample_family(n, 50, root.stream("c5_sample", static_cast<std::uint64_t>(i)));
            const double a = operator_norm(evaluate(selfadjointize(p), fam));
            const double b = operator_norm(evaluate(p, fam));
            worst = std::max(worst, std::abs(a - b));
        }
        return Outcome{worst <= 1e-8, fmt("worst difference %.2e", worst)};
    });

    criterion(6, "std of ||sum lambda_j Y_j|| over 200 reps: m=100 vs m=400 ratio in [1.4, 2.8]", 300, [&] {
        const auto cfg = lab::parse_config("experiment = concentration\nm = 100, 400\nreps = 200\n");
        const auto lambdas = cfg.real_list("lambdas");
        MatrixPoly p(3, 1, 1);
        for (int j = 0; j < 3; ++j) p.add_term({j + 1}, ComplexMatrix::Constant(1, 1, lambdas[j]));
        const double s100 = sample_stddev(sampled_norms(p, 100, 200, Ensemble::ginibre, root.stream("c6", 100)));
        const double s400 = sample_stddev(sampled_norms(p, 400, 200, Ensemble::ginibre, root.stream("c6", 400)));
        const double ratio = s100 / s400;
        return Outcome{ratio >= 1.4 && ratio <= 2.8,
                       fmt("std(100) %.5f", s100) + fmt(", std(400) %.5f", s400) + fmt(", ratio %.3f", ratio)};
    });

    criterion(7, "witness with blocks 1..64: crossing n* <= 60; rhs(4n)/rhs(n) in [1.7, 2.3]", 600, [&] {
        std::vector<int> sizes;
        for (int m = 1; m <= 64; ++m) sizes.push_back(m);
        const auto table = witness_experiment(60, sizes, root.stream("c7", 0));
        double lo = 1e9, hi = 0.0;
        for (int n = 1; 4 * n <= 60; ++n) {
            const double r = table.rows[4 * n - 1].rhs / table.rows[n - 1].rhs;
            lo = std::min(lo, r);
            hi = std::max(hi, r);
        }
        const bool crossed = table.first_crossing.has_value() && *table.first_crossing <= 60;
        return Outcome{crossed && lo >= 1.7 && hi <= 2.3,
                       (crossed ? "n* = " + std::to_string(*table.first_crossing) : std::string("no crossing")) +
                           fmt(", rhs(4n)/rhs(n) over n=1..15 in [%.3f, ", lo) + fmt("%.3f]", hi)};
    });

    criterion(8, "30 random deg<=2, k<=2 polys: max ratio <= 1.25, min ratio >= 0.75 on m={200,300,400}", 900, [&] {
        auto cfg = lab::parse_config("experiment = truncation\nnum_polys = 30\nd_max = 2\nk_max = 2\nm = 200, 300, 400\n");
        cfg.master_seed = kSeed;
        const auto res = lab::run_experiment(cfg);
        const auto& cols = res.columns;
        const auto col = static_cast<std::size_t>(std::find(cols.begin(), cols.end(), "ratio") - cols.begin());
        double lo = 1e9, hi = 0.0;
        for (const auto& row : res.rows) {
            const double r = std::get<double>(row[col]);
            lo = std::min(lo, r);
            hi = std::max(hi, r);
        }
        return Outcome{res.rows.size() == 30 && hi <= 1.25 && lo >= 0.75,
                       fmt("min ratio %.4f", lo) + fmt(", max ratio %.4f", hi)};
    });

    criterion(9, "chi at d=1, k=ceil(m^0.2), m=50..400: nonincreasing within +0.05, <= 1.3 at m=400", 900, [&] {
        auto cfg = lab::parse_config("experiment = chi_scan\nd = 1\nm = 50, 100, 200, 400\nbudget = 30\nreps = 4\n");
        cfg.master_seed = kSeed;
        const auto res = lab::run_experiment(cfg);
        std::vector<double> values;
        std::string detail;
        for (const auto& row : res.rows) {
            values.push_back(std::get<double>(row[3]));
            detail += "m=" + std::to_string(std::get<std::int64_t>(row[0])) + " k=" +
                      std::to_string(std::get<std::int64_t>(row[1])) + fmt(" chi %.4f  ", values.back());
        }
        bool ok = values.size() == 4 && values.back() <= 1.3;
        for (std::size_t i = 1; i < values.size(); ++i) ok = ok && values[i] <= values[i - 1] + 0.05;
        return Outcome{ok, detail};
    });

    criterion(10, "|N(0,1)| tails under subgaussian bound with sigma from moment_sigma(a=1/2, p<=32)", 60, [&] {
        RandomSource rng = root.stream("c10", 0);
        std::vector<double> v(100000);
        for (auto& x : v) x = std::abs(rng.normal());
        const SampleSet s(v);
        TailBoundParams params;
        params.sigma = moment_sigma(s, 0.5, 32);
        params.a = 0.5;
        bool ok = true;
        std::string detail = fmt("sigma %.4f;", params.sigma);
        for (double t : {1.0, 2.0, 3.0}) {
            const double emp = empirical_upper_tail(s, t), bound = subgaussian_tail_bound(params, t);
            ok = ok && emp <= bound;
            detail += fmt(" t=%.0f:", t) + fmt(" %.5f", emp) + fmt(" <= %.5f", bound);
        }
        return Outcome{ok, detail};
    });

    criterion(11, "every experiment: identical rows on rerun at 1 and 8 workers", 1800, [&] {
        const char* configs[] = {
            "experiment = moments\nm = 50, 100\np = 1..4\nreps = 3\n",
            "experiment = strong_convergence\nnum_polys = 2\nd = 2\nk = 2\nm = 50, 100\nreps = 2\np_max = 4\nprobe_m = 100\n",
            "experiment = chi_scan\nm = 30, 60\nbudget = 6\nreps = 3\nprobe_m = 60\n",
            "experiment = c_scan\nm_low = 40\nm_high = 80\nm_step = 40\nbudget = 4\nreps = 1\nprobe_m = 60\n",
            "experiment = concentration\nm = 30, 60\nreps = 40\n",
            "experiment = witness\nn_max = 30\nblock_sizes = 1..32\n",
            "experiment = truncation\nnum_polys = 6\nm = 40, 60\np_max = 4\nprobe_m = 60\n",
        };
        int same = 0, total = 0;
        std::string bad;
        const int saved = worker_count();
        for (const char* text : configs) {
            auto cfg = lab::parse_config(text);
            cfg.master_seed = kSeed;
            set_worker_count(1);
            const auto a = lab::to_csv(lab::run_experiment(cfg));
            const auto b = lab::to_csv(lab::run_experiment(cfg));
            set_worker_count(8);
            const auto c = lab::to_csv(lab::run_experiment(cfg));
            ++total;
            if (a == b && a == c)
                ++same;
            else
                bad += " " + std::string(lab::experiment_name(cfg.experiment));
        }
        set_worker_count(saved);
        return Outcome{same == total, std::to_string(same) + "/" + std::to_string(total) + " experiments identical" + bad};
    });

    std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
