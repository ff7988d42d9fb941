#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace collapse {

// Single-pass mean/variance accumulator (Welford).
struct RunningStats {
    std::size_t n = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x);
    double variance() const;     // sample variance, 0 for n < 2
    double stderr_mean() const;  // sqrt(variance / n)
};

double normal_cdf(double x, double mean = 0.0, double stddev = 1.0);

// Upper regularized incomplete gamma Q(a, x).
double regularized_gamma_q(double a, double x);

// P(chi2_dof >= statistic).
double chi_square_pvalue(double statistic, int dof);

// Interior edges splitting the distribution into n_bins cells of equal
// probability, found by bisecting cdf on [lo, hi]. cdf must be monotone.
std::vector<double> equal_probability_edges(const std::function<double(double)>& cdf,
                                            int n_bins, double lo, double hi);

// Pearson goodness-of-fit p-value of samples against cdf, using n_bins
// equal-probability bins (dof = n_bins - 1).
double chi_square_gof_pvalue(const std::vector<double>& samples,
                             const std::function<double(double)>& cdf, int n_bins,
                             double lo, double hi);

// Two-sample Kolmogorov-Smirnov statistic sup |F_x - F_y|.
double ks_two_sample_statistic(std::vector<double> x, std::vector<double> y);

// One-sample statistic sup |F_x - cdf|.
double ks_one_sample_statistic(std::vector<double> x,
                               const std::function<double(double)>& cdf);

// Weighted-ECDF-vs-sample-ECDF statistic; weights need not be normalized.
double ks_weighted_statistic(const std::vector<double>& values,
                             const std::vector<double>& weights,
                             std::vector<double> sample);

// (sum w)^2 / sum w^2; equals n for uniform weights.
double effective_sample_size(const std::vector<double>& weights);

// Large-sample critical value c(alpha) * sqrt((n + m) / (n m)).
double ks_critical_value(double n_eff, double m_eff, double alpha = 0.01);

// Composite Simpson quadrature; n_panels must be even and >= 2.
double simpson(const std::function<double(double)>& f, double lo, double hi,
               int n_panels);

// Ordinary least squares slope of y against x.
double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace collapse
