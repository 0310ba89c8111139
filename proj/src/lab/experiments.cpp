// SPDX-License-Identifier: Apache-2.0
#include "freelab/lab/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "freelab/concentration.hpp"
#include "freelab/errors.hpp"
#include "freelab/freeoracle.hpp"
#include "freelab/suprema.hpp"

namespace freelab::lab {

namespace {

using Row = std::vector<Cell>;
using I = std::int64_t;

std::uint64_t catalan(int p) {
    std::uint64_t c = 1;
    for (int i = 0; i < p; ++i) c = c * 2 * (2 * static_cast<std::uint64_t>(i) + 1) / (static_cast<std::uint64_t>(i) + 2);
    return c;
}

CoeffStyle style_of(const ExperimentConfig& cfg) {
    return cfg.text("style") == "sparse" ? CoeffStyle::sparse : CoeffStyle::gaussian;
}

FreeModel model_of(const ExperimentConfig& cfg) {
    return cfg.text("model") == "semicircular" ? FreeModel::semicircular : FreeModel::circular;
}

std::uint64_t seed_of(const RandomSource& rng) {
    RandomSource copy = rng;
    return copy.engine()();
}

std::vector<int> sorted_unique(std::vector<int> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

void run_moments(const ExperimentConfig& cfg, const RandomSource& root, Exec exec, ExperimentResult& out) {
    const auto ps = cfg.int_list("p");
    if (ps.empty()) throw ConfigError("param 'p': needs at least one power");
    const int p_max = *std::max_element(ps.begin(), ps.end());
    const auto& name = cfg.text("ensemble");
    const Ensemble kind = name == "ginibre" ? Ensemble::ginibre : Ensemble::gue;
    const int reps = cfg.integer32("reps");
    for (int m : cfg.int_list("m")) {
        const auto moments = sampled_moments(m, p_max, reps, kind, root.stream("m", static_cast<std::uint64_t>(m)), exec);
        for (int r = 0; r < reps; ++r)
            for (int p : ps) {
                const double value = moments[static_cast<std::size_t>(r)][static_cast<std::size_t>(p - 1)];
                const double exact = static_cast<double>(catalan(p));
                out.rows.push_back(Row{name, I{m}, I{p}, I{r}, value, exact, std::abs(value - exact)});
            }
    }
}

void run_strong_convergence(const ExperimentConfig& cfg, const RandomSource& root, Exec exec,
                            ExperimentResult& out) {
    const int n = cfg.integer32("n"), d = cfg.integer32("d"), k = cfg.integer32("k");
    const int count = cfg.integer32("num_polys");
    const int reps = cfg.integer32("reps");
    const auto ms = cfg.int_list("m");
    FreeNormOptions opt;
    opt.p_max = cfg.integer32("p_max");
    opt.probe_m = cfg.integer32("probe_m");
    opt.reps = cfg.integer32("probe_reps");
    opt.model = model_of(cfg);
    opt.exec = Exec::serial;
    const Ensemble kind = opt.model == FreeModel::circular ? Ensemble::ginibre : Ensemble::gue;

    std::vector<MatrixPoly> polys;
    for (int i = 0; i < count; ++i)
        polys.push_back(random_polynomial(n, d, k, seed_of(root.stream("poly", static_cast<std::uint64_t>(i))),
                                          style_of(cfg)));
    std::vector<NormInterval> intervals(polys.size());
    for_each_task(
        polys.size(),
        [&](std::size_t i) { intervals[i] = free_norm_estimate(polys[i], opt, root.stream("oracle", i)); }, exec);

    for (std::size_t i = 0; i < polys.size(); ++i) {
        const auto& iv = intervals[i];
        for (int m : ms) {
            const auto norms = sampled_norms(polys[i], m, reps, kind,
                                             root.stream("sample", i).stream("m", static_cast<std::uint64_t>(m)),
                                             SpectralConfig{}, exec);
            const double mu = mean(norms);
            const double sd = norms.size() > 1 ? sample_stddev(norms) : 0.0;
            out.rows.push_back(Row{I(i), I{m}, mu, sd, iv.lower, iv.upper, iv.upper_certified, iv.midpoint(),
                                   mu / iv.midpoint()});
        }
    }
}

SearchOptions search_options(const ExperimentConfig& cfg, Exec exec) {
    SearchOptions opt;
    opt.n = cfg.integer32("n");
    opt.style = style_of(cfg);
    opt.max_hill_steps = cfg.integer32("max_hill_steps");
    opt.oracle.model = model_of(cfg);
    opt.oracle.probe_m = cfg.integer32("probe_m");
    opt.exec = exec;
    opt.oracle.exec = exec;
    return opt;
}

void run_chi_scan(const ExperimentConfig& cfg, const RandomSource& root, Exec exec, ExperimentResult& out) {
    const auto ms = cfg.int_list("m");
    const auto ks = cfg.int_list("k");
    if (!ks.empty() && ks.size() != 1 && ks.size() != ms.size())
        throw ConfigError("param 'k': must be empty, a single value, or one value per m");
    SearchOptions opt = search_options(cfg, exec);
    opt.oracle.reps = cfg.integer32("probe_reps");
    const int d = cfg.integer32("d");
    for (std::size_t i = 0; i < ms.size(); ++i) {
        const int m = ms[i];
        int k = 0;
        if (ks.empty())
            k = static_cast<int>(std::ceil(std::pow(static_cast<double>(m), cfg.real("exponent")) - 1e-12));
        else
            k = ks.size() == 1 ? ks[0] : ks[i];
        k = std::max(k, 1);
        const ChiEstimate est =
            estimate_chi(d, k, m, cfg.integer32("budget"), cfg.integer32("reps"), root, opt);
        out.rows.push_back(Row{I{m}, I{k}, I{d}, est.value, est.heuristic_normalization, I{est.evaluations},
                               to_json(est.witness).dump()});
    }
}

void run_c_scan(const ExperimentConfig& cfg, const RandomSource& root, Exec exec, ExperimentResult& out) {
    SearchOptions opt = search_options(cfg, exec);
    const int d = cfg.integer32("d");
    const CEstimate est = estimate_C(d, cfg.integer32("m_low"), cfg.integer32("m_high"), cfg.integer32("k_cap"),
                                     cfg.integer32("budget"), cfg.integer32("reps"), root, opt,
                                     cfg.integer32("m_step"));
    out.rows.push_back(Row{I{d}, I{est.m_low}, I{est.m_high}, I{est.t}, est.value, I{est.witness_m},
                           I{est.witness_k}, est.heuristic_normalization, to_json(est.witness).dump()});
}

void run_concentration(const ExperimentConfig& cfg, const RandomSource& root, Exec exec, ExperimentResult& out) {
    const auto ms = sorted_unique(cfg.int_list("m"));
    const auto lambdas = cfg.real_list("lambdas");
    const auto ts = cfg.real_list("t");
    const int reps = cfg.integer32("reps");
    if (lambdas.empty()) throw ConfigError("param 'lambdas': needs at least one weight");
    if (reps < 2) throw ConfigError("param 'reps': must be >= 2");
    const int n = static_cast<int>(lambdas.size());
    MatrixPoly p(n, 1, 1);
    for (int j = 0; j < n; ++j) p.add_term({j + 1}, ComplexMatrix::Constant(1, 1, lambdas[static_cast<std::size_t>(j)]));

    // c1 is fitted on one set of samples and checked on an independent one.
    std::vector<SampleSet> train, test;
    for (int m : ms) {
        const auto key = static_cast<std::uint64_t>(m);
        train.emplace_back(sampled_norms(p, m, reps, Ensemble::ginibre, root.stream("train", key), {}, exec));
        test.emplace_back(sampled_norms(p, m, reps, Ensemble::ginibre, root.stream("test", key), {}, exec));
    }
    const C1Fit fit = fit_c1(train, ms, 1, ts);
    for (std::size_t i = 0; i < ms.size(); ++i) {
        const double sd = sample_stddev(test[i].values());
        for (double t : ts) {
            TailBoundParams params;
            params.c1 = fit.envelope;
            params.d = 1;
            params.m = ms[i];
            out.rows.push_back(Row{I{ms[i]}, t, test[i].mean(), sd, empirical_tail(test[i], t), fit.regression,
                                   fit.envelope, psi(params, t)});
        }
    }
}

void run_witness(const ExperimentConfig& cfg, const RandomSource& root, Exec exec, ExperimentResult& out) {
    const WitnessTable table =
        witness_experiment(cfg.integer32("n_max"), cfg.int_list("block_sizes"), root, SpectralConfig{}, exec);
    for (const auto& row : table.rows)
        out.rows.push_back(Row{I{row.n}, row.lhs, row.rhs, row.crossed,
                               table.generator_norms[static_cast<std::size_t>(row.n - 1)]});
}

void run_truncation(const ExperimentConfig& cfg, const RandomSource& root, Exec exec, ExperimentResult& out) {
    const int count = cfg.integer32("num_polys");
    const int n = cfg.integer32("n"), d_max = cfg.integer32("d_max"), k_max = cfg.integer32("k_max");
    FreeNormOptions opt;
    opt.p_max = cfg.integer32("p_max");
    opt.probe_m = cfg.integer32("probe_m");
    opt.reps = cfg.integer32("probe_reps");
    opt.exec = Exec::serial;

    // Degrees cycle through 1..d_max and sizes through 1..k_max.
    std::vector<MatrixPoly> polys;
    for (int i = 0; i < count; ++i) {
        const int d = 1 + i % d_max;
        const int k = 1 + (i / d_max) % k_max;
        polys.push_back(random_polynomial(n, d, k, seed_of(root.stream("poly", static_cast<std::uint64_t>(i))),
                                          style_of(cfg)));
    }
    std::vector<NormInterval> intervals(polys.size());
    for_each_task(
        polys.size(),
        [&](std::size_t i) { intervals[i] = free_norm_estimate(polys[i], opt, root.stream("oracle", i)); }, exec);
    const FidelityReport report = truncation_fidelity(polys, cfg.int_list("m"), intervals,
                                                      root.stream("fidelity", 0), FreeModel::circular, {}, exec);
    for (std::size_t i = 0; i < polys.size(); ++i) {
        const auto& iv = intervals[i];
        const auto& row = report.rows[i];
        out.rows.push_back(Row{I(i), I{polys[i].degree()}, I{polys[i].k()}, I(polys[i].size()), row.max_norm,
                               iv.lower, iv.upper, iv.upper_certified, iv.midpoint(), row.ratio,
                               row.lower_consistent});
    }
}

}  // namespace

const std::vector<std::string>& experiment_columns(ExperimentKind kind) {
    static const std::map<ExperimentKind, std::vector<std::string>> columns = {
        {ExperimentKind::moments, {"ensemble", "m", "p", "rep", "moment", "free_moment", "abs_error"}},
        {ExperimentKind::strong_convergence,
         {"poly", "m", "mean_norm", "std_norm", "lower", "upper", "upper_certified", "midpoint", "ratio"}},
        {ExperimentKind::chi_scan, {"m", "k", "d", "value", "heuristic_normalization", "evaluations", "witness"}},
        {ExperimentKind::c_scan,
         {"d", "m_low", "m_high", "k_cap", "value", "witness_m", "witness_k", "heuristic_normalization", "witness"}},
        {ExperimentKind::concentration,
         {"m", "t", "mean", "stddev", "empirical_tail", "c1_regression", "c1_envelope", "psi"}},
        {ExperimentKind::witness, {"n", "lhs", "rhs", "crossed", "u_norm"}},
        {ExperimentKind::truncation,
         {"poly", "degree", "k", "terms", "max_norm", "lower", "upper", "upper_certified", "midpoint", "ratio",
          "lower_consistent"}},
    };
    return columns.at(kind);
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, Exec exec) {
    const auto start = std::chrono::steady_clock::now();
    ExperimentResult out;
    out.experiment = std::string(experiment_name(cfg.experiment));
    out.params = config_to_json(cfg);
    out.master_seed = cfg.master_seed;
    out.columns = experiment_columns(cfg.experiment);
    const RandomSource root = RandomSource(cfg.master_seed).stream(out.experiment, 0);
    switch (cfg.experiment) {
        case ExperimentKind::moments: run_moments(cfg, root, exec, out); break;
        case ExperimentKind::strong_convergence: run_strong_convergence(cfg, root, exec, out); break;
        case ExperimentKind::chi_scan: run_chi_scan(cfg, root, exec, out); break;
        case ExperimentKind::c_scan: run_c_scan(cfg, root, exec, out); break;
        case ExperimentKind::concentration: run_concentration(cfg, root, exec, out); break;
        case ExperimentKind::witness: run_witness(cfg, root, exec, out); break;
        case ExperimentKind::truncation: run_truncation(cfg, root, exec, out); break;
    }
    out.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

ExperimentResult coefficient_table(const MatrixPoly& p) {
    ExperimentResult out;
    out.experiment = "coefficients";
    out.params = to_json(p);
    out.columns = {"word", "row", "col", "re", "im"};
    for (const auto& [word, coeff] : p.terms()) {
        std::string w;
        for (std::size_t i = 0; i < word.size(); ++i) w += (i ? " " : "") + std::to_string(word[i]);
        for (Eigen::Index r = 0; r < coeff.rows(); ++r)
            for (Eigen::Index c = 0; c < coeff.cols(); ++c)
                out.rows.push_back(Row{w, I{r}, I{c}, coeff(r, c).real(), coeff(r, c).imag()});
    }
    return out;
}

}  // namespace freelab::lab
