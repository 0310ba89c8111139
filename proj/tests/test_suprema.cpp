#include <doctest.h>

#include "freelab/errors.hpp"
#include "freelab/spectra.hpp"
#include "freelab/suprema.hpp"

using namespace freelab;

namespace {

MatrixPoly c1_poly() { return MatrixPoly::monomial(1, 1, {1}, ComplexMatrix::Constant(1, 1, 1.0)); }

std::vector<int> range(int a, int b) {
    std::vector<int> v;
    for (int i = a; i <= b; ++i) v.push_back(i);
    return v;
}

SearchOptions fast_options() {
    SearchOptions opt;
    opt.oracle.probe_m = 100;
    opt.oracle.reps = 1;
    return opt;
}

}  // namespace

TEST_CASE("covering_net examples") {
    const auto net1 = covering_net(1, 1.0, euclidean_norm);
    REQUIRE(net1.points.size() == 3);
    std::vector<double> xs;
    for (const auto& p : net1.points) xs.push_back(p[0]);
    std::sort(xs.begin(), xs.end());
    CHECK(xs == std::vector<double>{-1.0, 0.0, 1.0});
    CHECK(net1.cardinality_bound() == doctest::Approx(3.0));

    const auto net2 = covering_net(2, 0.5, euclidean_norm);
    CHECK(static_cast<double>(net2.points.size()) <= 25.0);
    CHECK(net2.max_probe_gap <= 0.5 * 1.05);

    const auto net3 = covering_net(3, 0.5, euclidean_norm, 3);
    CHECK(static_cast<double>(net3.points.size()) <= net3.cardinality_bound());
    CHECK(net3.max_probe_gap <= 0.5 * 1.05);
    CHECK(net3.probes == 10000);
}

TEST_CASE("covering_net properties") {
    const NormOracle l1 = [](std::span<const double> x) {
        double s = 0;
        for (double v : x) s += std::abs(v);
        return s;
    };
    const auto net = covering_net(2, 0.4, l1, 1);
    CHECK(static_cast<double>(net.points.size()) <= net.cardinality_bound());
    for (const auto& p : net.points) CHECK(l1(p) <= 1.0 + 1e-12);
    for (std::size_t i = 0; i < net.points.size(); ++i)
        for (std::size_t j = i + 1; j < net.points.size(); ++j) {
            const double d = std::abs(net.points[i][0] - net.points[j][0]) + std::abs(net.points[i][1] - net.points[j][1]);
            CHECK(d >= 0.4 - 1e-12);
        }
    CHECK(covering_net(2, 0.4, l1, 1).points == net.points);

    CHECK_THROWS_AS(covering_net(13, 0.5, euclidean_norm), BudgetExceeded);
    CHECK_THROWS_AS(covering_net(2, 0.0, euclidean_norm), InvalidInput);
    CHECK_THROWS_AS(covering_net(2, 1.5, euclidean_norm), InvalidInput);
}

TEST_CASE("net_lift") {
    CHECK(net_lift(1.0, 0.5) == 2.0);
    CHECK(net_lift(3.0, 1e-9) == doctest::Approx(3.0));
    for (double d : {0.1, 0.5, 0.9})
        for (double x : {0.0, 1.0, 7.5}) CHECK(net_lift(x, d) >= x);
    CHECK_THROWS_AS(net_lift(1.0, 1.0), InvalidInput);
    CHECK_THROWS_AS(net_lift(1.0, -0.1), InvalidInput);
}

TEST_CASE("net-lifted sup dominates random search on a degree-one instance") {
    const auto family = sample_family(1, 60, RandomSource(4));
    const auto f = [&](std::span<const double> c) {
        return operator_norm(evaluate(degree_one_scalar_poly(c), family));
    };
    // Certified upper bound of ||P(c)|| for real (a0, a1, b1): a norm on R^3.
    const NormOracle norm = [](std::span<const double> c) {
        return *certified_upper_bound(degree_one_scalar_poly(c));
    };
    const double delta = 0.5;
    const auto net = covering_net(3, delta, norm, 2, 2000);
    double sup_net = 0.0;
    for (const auto& p : net.points) sup_net = std::max(sup_net, f(p));
    const double lifted = net_lift(sup_net, delta);

    RandomSource rng(9);
    double sup_random = 0.0;
    for (int i = 0; i < 300; ++i) {
        std::vector<double> c{rng.normal(), rng.normal(), rng.normal()};
        const double len = norm(c);
        for (auto& v : c) v /= len;
        sup_random = std::max(sup_random, f(c));
    }
    CHECK(lifted >= sup_random);
}

TEST_CASE("normalized mean norm of c1") {
    std::vector<std::vector<ComplexMatrix>> fams;
    for (int r = 0; r < 10; ++r) fams.push_back(sample_family(1, 100, RandomSource(30).stream("rep", r)));
    const auto [ratio, heuristic] = normalized_mean_norm(c1_poly(), fams, {}, RandomSource(1));
    CHECK_FALSE(heuristic);
    CHECK(ratio >= 0.95);
    CHECK(ratio <= 1.15);
}

TEST_CASE("hill steps grow with the budget") {
    CHECK(hill_steps_for_budget(1, 50) == 0);
    CHECK(hill_steps_for_budget(3, 50) == 1);
    CHECK(hill_steps_for_budget(30, 50) == 14);
    CHECK(hill_steps_for_budget(1000, 50) == 50);
    int prev_hill = 0, prev_rand = 0;
    for (int b = 1; b < 200; ++b) {
        const int h = hill_steps_for_budget(b, 50);
        CHECK(h >= prev_hill);
        CHECK(b - h >= prev_rand);
        prev_hill = h;
        prev_rand = b - h;
    }
}

TEST_CASE("estimate_chi") {
    const RandomSource rng(11);
    const auto opt = fast_options();
    const auto one = estimate_chi(1, 1, 60, 1, 4, rng, opt);
    CHECK(one.evaluations == 1);
    CHECK_FALSE(one.heuristic_normalization);
    std::vector<std::vector<ComplexMatrix>> fams;
    const RandomSource sample_root = rng.stream("chi_sample", 60);
    for (int r = 0; r < 4; ++r) fams.push_back(sample_family(1, 60, sample_root.stream("rep", r)));
    CHECK(normalized_mean_norm(one.witness, fams, opt, rng).first == doctest::Approx(one.value).epsilon(1e-12));

    double prev = 0.0;
    for (int budget : {1, 4, 9, 20}) {
        const auto est = estimate_chi(1, 2, 60, budget, 4, rng, opt);
        CHECK(est.value >= prev);
        CHECK(est.evaluations == budget);
        prev = est.value;
    }
    CHECK(estimate_chi(2, 1, 40, 3, 2, rng, opt).heuristic_normalization);
    CHECK_THROWS_AS(estimate_chi(1, 1, 40, 0, 2, rng, opt), InvalidInput);
}

TEST_CASE("estimate_chi is the same serially and in parallel") {
    auto opt = fast_options();
    const auto par = estimate_chi(1, 2, 50, 6, 3, RandomSource(12), opt);
    opt.exec = Exec::serial;
    opt.oracle.exec = Exec::serial;
    const auto ser = estimate_chi(1, 2, 50, 6, 3, RandomSource(12), opt);
    CHECK(par.value == ser.value);
}

TEST_CASE("estimate_C") {
    const RandomSource rng(13);
    const auto opt = fast_options();
    const auto single = estimate_C(1, 80, 80, 1, 1, 1, rng, opt);
    const auto fam = sample_family(1, 80, rng.stream("C_sample", 80));
    CHECK(single.value == doctest::Approx(operator_norm(evaluate(single.witness, fam))).epsilon(1e-12));
    CHECK(single.witness_m == 80);

    const auto narrow = estimate_C(1, 60, 90, 2, 5, 1, rng, opt, 10);
    const auto wide = estimate_C(1, 40, 90, 2, 5, 1, rng, opt, 10);
    CHECK(wide.value >= narrow.value);
    const auto more = estimate_C(1, 60, 90, 2, 9, 1, rng, opt, 10);
    CHECK(more.value >= narrow.value);
    CHECK_THROWS_AS(estimate_C(1, 90, 60, 2, 5, 1, rng, opt), InvalidInput);
}

TEST_CASE("estimate_C at degree two stays near one") {
    SearchOptions opt;
    opt.oracle.probe_m = 200;
    opt.oracle.reps = 2;
    const auto est = estimate_C(2, 200, 200, 2, 30, 2, RandomSource(14), opt);
    CHECK(est.heuristic_normalization);
    CHECK(est.value <= 1.25);
    CHECK(est.value > 0.5);
}

TEST_CASE("witness experiment") {
    const RandomSource rng(15);
    const auto table = witness_experiment(60, range(1, 64), rng);
    REQUIRE(table.rows.size() == 60);
    CHECK_FALSE(table.rows[0].crossed);
    CHECK(table.rows[0].lhs == 1.0);
    CHECK(table.rows[0].rhs == doctest::Approx(2 * table.generator_norms[0]));
    REQUIRE(table.first_crossing.has_value());
    CHECK(*table.first_crossing <= 60);
    for (std::size_t i = 1; i < table.rows.size(); ++i) CHECK(table.rows[i].rhs >= table.rows[i - 1].rhs);
    for (int n : {2, 5, 10, 15}) {
        const double r = table.rows[4 * n - 1].rhs / table.rows[n - 1].rhs;
        CHECK(r >= 1.7);
        CHECK(r <= 2.3);
    }
    const auto smaller = witness_experiment(60, range(1, 32), rng);
    for (std::size_t i = 0; i < table.rows.size(); ++i) CHECK(table.rows[i].rhs >= smaller.rows[i].rhs);
    CHECK_THROWS_AS(witness_experiment(0, range(1, 4), rng), InvalidInput);
}

TEST_CASE("truncation fidelity") {
    const RandomSource rng(16);
    const auto unit = MatrixPoly::unit(1, 2, 0);
    NormInterval one{1.0, 1.0, 1, 0, true};
    const auto r1 = truncation_fidelity({unit}, {50, 100}, {one}, rng);
    CHECK(r1.max_ratio == doctest::Approx(1.0).epsilon(1e-14));

    FreeNormOptions fo;
    const auto iv = free_norm_estimate(c1_poly(), fo, rng);
    const auto r2 = truncation_fidelity({c1_poly()}, {200, 400}, {iv}, rng);
    CHECK(r2.max_ratio >= 0.9);
    CHECK(r2.max_ratio <= 1.2);
    CHECK(r2.rows[0].lower_consistent);

    NormInterval bad{2.0, 1.0, 1, 0, false};
    CHECK_THROWS_AS(truncation_fidelity({unit}, {50}, {bad}, rng), InvalidInput);
    CHECK_THROWS_AS(truncation_fidelity({unit}, {50}, {}, rng), InvalidInput);
}
