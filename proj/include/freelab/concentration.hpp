// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

namespace freelab {

/// Parameters of the two tail functions.
///   moment growth:  sup_p p^{-a} ||F||_p <= sigma
///   concentration:  psi_m(t) = e exp(-t^{2/d} m^{1/d} / c1)
struct TailBoundParams {
    double sigma = 1.0;
    double a = 0.5;
    double c1 = 1.0;
    int d = 1;
    int m = 1;
};

/// Samples of F = ||P(Y^(m))||; `mean` plays the role of t_m = E F.
class SampleSet {
public:
    explicit SampleSet(std::vector<double> values);
    const std::vector<double>& values() const noexcept { return values_; }
    double mean() const noexcept { return mean_; }
    std::size_t size() const noexcept { return values_.size(); }

private:
    std::vector<double> values_;
    double mean_;
};

/// e exp(-(e sigma)^{-1/a} t^{1/a}).
double subgaussian_tail_bound(const TailBoundParams& params, double t);

/// psi_m(t) = e exp(-t^{2/d} m^{1/d} / c1).
double psi(const TailBoundParams& params, double t);

/// Fraction of samples with |value - mean| > t.
double empirical_tail(const SampleSet& samples, double t);

/// Fraction of samples with value > t (uncentered).
double empirical_upper_tail(const SampleSet& samples, double t);

/// max over p = 1..p_max of p^{-a} (mean |x - mean|^p)^{1/p}.
double moment_sigma(const SampleSet& samples, double a, int p_max);

/// 2 t_m psi_m(t_m) + 2 int_{t_m}^inf psi_m(t) dt. The integral runs by
/// adaptive Gauss-Kronrod up to t_m + 50 (c1 / m^{1/d})^{d/2}; the rest is
/// added through the incomplete-gamma closed form.
double truncation_bound_rhs(double t_m, const TailBoundParams& params);

/// Closed form of int_{t0}^inf psi_m(t) dt, used to check the quadrature.
double psi_tail_integral(double t0, const TailBoundParams& params);

/// L_p norm of a standard normal: (2^{p/2} Gamma((p+1)/2) / sqrt(pi))^{1/p}.
double gaussian_lp_norm(double p);

/// Calibrated c1 for psi_m from centered empirical tails on a t-grid.
/// `regression` is the least-squares slope of log(tail/e) against
/// -t^{2/d} m^{1/d}. `envelope` is the smallest c1 for which psi_m dominates
/// the tails inflated by two binomial standard errors; use it when
/// dominance is required.
struct C1Fit {
    double regression = 0.0;
    double envelope = 0.0;
    int points = 0;
};

C1Fit fit_c1(const std::vector<SampleSet>& samples_by_m, const std::vector<int>& ms, int d,
             const std::vector<double>& t_grid);

}  // namespace freelab
