// SPDX-License-Identifier: Apache-2.0
#include "freelab/concentration.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "freelab/errors.hpp"

namespace freelab {

namespace {

void check_concentration(const TailBoundParams& p) {
    if (!(p.c1 > 0.0) || p.d < 1 || p.m < 1)
        throw InvalidInput("concentration parameters need c1 > 0, d >= 1, m >= 1");
}

double psi_rate(const TailBoundParams& p) {
    return std::pow(static_cast<double>(p.m), 1.0 / p.d) / p.c1;
}

}  // namespace

SampleSet::SampleSet(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) throw InvalidInput("sample set must be nonempty");
    mean_ = std::accumulate(values_.begin(), values_.end(), 0.0) / static_cast<double>(values_.size());
}

double subgaussian_tail_bound(const TailBoundParams& params, double t) {
    if (!(params.sigma > 0.0) || !(params.a > 0.0)) throw InvalidInput("sigma and a must be positive");
    if (t < 0.0) throw InvalidInput("t must be >= 0");
    const double e = std::numbers::e;
    return e * std::exp(-std::pow(e * params.sigma, -1.0 / params.a) * std::pow(t, 1.0 / params.a));
}

double psi(const TailBoundParams& params, double t) {
    check_concentration(params);
    if (t < 0.0) throw InvalidInput("t must be >= 0");
    return std::numbers::e * std::exp(-std::pow(t, 2.0 / params.d) * psi_rate(params));
}

double empirical_tail(const SampleSet& samples, double t) {
    if (t < 0.0) throw InvalidInput("t must be >= 0");
    const double mu = samples.mean();
    const auto hits = std::count_if(samples.values().begin(), samples.values().end(),
                                    [&](double v) { return std::abs(v - mu) > t; });
    return static_cast<double>(hits) / static_cast<double>(samples.size());
}

double empirical_upper_tail(const SampleSet& samples, double t) {
    const auto hits = std::count_if(samples.values().begin(), samples.values().end(), [&](double v) { return v > t; });
    return static_cast<double>(hits) / static_cast<double>(samples.size());
}

double moment_sigma(const SampleSet& samples, double a, int p_max) {
    if (p_max < 1) throw InvalidInput("p_max must be >= 1");
    const double mu = samples.mean();
    // Scale by the largest deviation so high powers stay finite.
    double scale = 0.0;
    for (double v : samples.values()) scale = std::max(scale, std::abs(v - mu));
    if (scale == 0.0) return 0.0;
    double best = 0.0;
    for (int p = 1; p <= p_max; ++p) {
        double acc = 0.0;
        for (double v : samples.values()) acc += std::pow(std::abs(v - mu) / scale, p);
        const double lp = scale * std::pow(acc / static_cast<double>(samples.size()), 1.0 / p);
        best = std::max(best, std::pow(static_cast<double>(p), -a) * lp);
    }
    return best;
}

double psi_tail_integral(double t0, const TailBoundParams& params) {
    check_concentration(params);
    const double beta = psi_rate(params);
    const double s = 0.5 * params.d;
    const double x = beta * std::pow(std::max(t0, 0.0), 2.0 / params.d);
    return std::numbers::e * s * std::pow(beta, -s) * boost::math::tgamma(s, x);
}

double truncation_bound_rhs(double t_m, const TailBoundParams& params) {
    check_concentration(params);
    if (!(t_m > 0.0)) throw InvalidInput("t_m must be positive");
    const double scale = std::pow(params.c1 / std::pow(static_cast<double>(params.m), 1.0 / params.d), 0.5 * params.d);
    const double upper = t_m + 50.0 * scale;
    double error = 0.0;
    const double body = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        [&](double t) { return psi(params, t); }, t_m, upper, 20, 1e-9, &error);
    if (!std::isfinite(body) || error > 1e-6 * std::max(body, 1e-300) + 1e-300)
        throw NumericFailure("tail integral did not reach the requested accuracy", body, error);
    const double remainder = psi_tail_integral(upper, params);
    return 2.0 * t_m * psi(params, t_m) + 2.0 * (body + remainder);
}

double gaussian_lp_norm(double p) {
    if (!(p >= 1.0)) throw InvalidInput("gaussian_lp_norm needs p >= 1");
    const double log_moment = 0.5 * p * std::log(2.0) + std::lgamma(0.5 * (p + 1.0)) - 0.5 * std::log(std::numbers::pi);
    return std::exp(log_moment / p);
}

C1Fit fit_c1(const std::vector<SampleSet>& samples_by_m, const std::vector<int>& ms, int d,
             const std::vector<double>& t_grid) {
    if (samples_by_m.size() != ms.size() || ms.empty()) throw InvalidInput("fit_c1 needs one sample set per m");
    if (d < 1) throw InvalidInput("d must be >= 1");
    C1Fit fit;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < ms.size(); ++i) {
        const auto& samples = samples_by_m[i];
        const double n = static_cast<double>(samples.size());
        for (double t : t_grid) {
            if (!(t > 0.0)) continue;
            const double x = std::pow(t, 2.0 / d) * std::pow(static_cast<double>(ms[i]), 1.0 / d);
            const double tail = empirical_tail(samples, t);
            const double inflated = std::min(1.0, tail + 2.0 * std::sqrt(tail * (1.0 - tail) / n) + 1.0 / n);
            fit.envelope = std::max(fit.envelope, x / (1.0 - std::log(inflated)));
            ++fit.points;
            if (tail > 0.0) {
                const double y = 1.0 - std::log(tail);  // = x / c1 under the model
                sxx += x * x;
                sxy += x * y;
            }
        }
    }
    fit.regression = sxy > 0.0 ? sxx / sxy : 0.0;
    return fit;
}

}  // namespace freelab
