#include "collapse/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace collapse {

void RunningStats::add(double x) {
    ++n;
    const double delta = x - mean;
    mean += delta / static_cast<double>(n);
    m2 += delta * (x - mean);
}

double RunningStats::variance() const {
    return n < 2 ? 0.0 : m2 / static_cast<double>(n - 1);
}

double RunningStats::stderr_mean() const {
    return n == 0 ? 0.0 : std::sqrt(variance() / static_cast<double>(n));
}

double normal_cdf(double x, double mean, double stddev) {
    return 0.5 * std::erfc(-(x - mean) / (stddev * std::sqrt(2.0)));
}

namespace {

double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int i = 0; i < 500; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::fabs(del) < std::fabs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_q_contfrac(double a, double x) {
    constexpr double fpmin = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / fpmin;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 500; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < fpmin) d = fpmin;
        c = b + an / c;
        if (std::fabs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-16) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double regularized_gamma_q(double a, double x) {
    if (!(a > 0.0) || x < 0.0) {
        throw std::invalid_argument("regularized_gamma_q needs a > 0, x >= 0");
    }
    if (x == 0.0) return 1.0;
    return x < a + 1.0 ? 1.0 - gamma_p_series(a, x) : gamma_q_contfrac(a, x);
}

double chi_square_pvalue(double statistic, int dof) {
    if (dof < 1) throw std::invalid_argument("dof must be >= 1");
    return regularized_gamma_q(0.5 * dof, 0.5 * statistic);
}

std::vector<double> equal_probability_edges(const std::function<double(double)>& cdf,
                                            int n_bins, double lo, double hi) {
    if (n_bins < 2) throw std::invalid_argument("need at least 2 bins");
    std::vector<double> edges(static_cast<std::size_t>(n_bins) - 1);
    for (int j = 1; j < n_bins; ++j) {
        const double target = static_cast<double>(j) / n_bins;
        double a = lo, b = hi;
        for (int iter = 0; iter < 200; ++iter) {
            const double mid = 0.5 * (a + b);
            (cdf(mid) < target ? a : b) = mid;
        }
        edges[static_cast<std::size_t>(j) - 1] = 0.5 * (a + b);
    }
    return edges;
}

double chi_square_gof_pvalue(const std::vector<double>& samples,
                             const std::function<double(double)>& cdf, int n_bins,
                             double lo, double hi) {
    if (samples.empty()) throw std::invalid_argument("no samples");
    const auto edges = equal_probability_edges(cdf, n_bins, lo, hi);
    std::vector<std::size_t> counts(static_cast<std::size_t>(n_bins), 0);
    for (double s : samples) {
        const auto it = std::upper_bound(edges.begin(), edges.end(), s);
        ++counts[static_cast<std::size_t>(it - edges.begin())];
    }
    const double expected = static_cast<double>(samples.size()) / n_bins;
    double stat = 0.0;
    for (std::size_t c : counts) {
        const double diff = static_cast<double>(c) - expected;
        stat += diff * diff / expected;
    }
    return chi_square_pvalue(stat, n_bins - 1);
}

double ks_two_sample_statistic(std::vector<double> x, std::vector<double> y) {
    if (x.empty() || y.empty()) throw std::invalid_argument("empty sample");
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    const double nx = static_cast<double>(x.size());
    const double ny = static_cast<double>(y.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < x.size() && j < y.size()) {
        const double t = std::min(x[i], y[j]);
        while (i < x.size() && x[i] <= t) ++i;
        while (j < y.size() && y[j] <= t) ++j;
        d = std::max(d, std::fabs(static_cast<double>(i) / nx - static_cast<double>(j) / ny));
    }
    return d;
}

double ks_one_sample_statistic(std::vector<double> x,
                               const std::function<double(double)>& cdf) {
    if (x.empty()) throw std::invalid_argument("empty sample");
    std::sort(x.begin(), x.end());
    const double n = static_cast<double>(x.size());
    double d = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double f = cdf(x[i]);
        d = std::max(d, std::fabs(static_cast<double>(i + 1) / n - f));
        d = std::max(d, std::fabs(f - static_cast<double>(i) / n));
    }
    return d;
}

double ks_weighted_statistic(const std::vector<double>& values,
                             const std::vector<double>& weights,
                             std::vector<double> sample) {
    if (values.size() != weights.size() || values.empty() || sample.empty()) {
        throw std::invalid_argument("size mismatch or empty input");
    }
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::sort(sample.begin(), sample.end());
    const double total_w = std::accumulate(weights.begin(), weights.end(), 0.0);
    const double m = static_cast<double>(sample.size());

    // Sweep the pooled jump points; both ECDFs are constant between them.
    std::size_t i = 0, j = 0;
    double cum_w = 0.0;
    double d = 0.0;
    while (i < order.size() || j < sample.size()) {
        double t;
        if (i < order.size() && (j == sample.size() || values[order[i]] <= sample[j])) {
            t = values[order[i]];
        } else {
            t = sample[j];
        }
        while (i < order.size() && values[order[i]] <= t) cum_w += weights[order[i++]];
        while (j < sample.size() && sample[j] <= t) ++j;
        d = std::max(d, std::fabs(cum_w / total_w - static_cast<double>(j) / m));
    }
    return d;
}

double effective_sample_size(const std::vector<double>& weights) {
    double sum = 0.0, sum_sq = 0.0;
    for (double w : weights) {
        sum += w;
        sum_sq += w * w;
    }
    return sum_sq > 0.0 ? sum * sum / sum_sq : 0.0;
}

double ks_critical_value(double n_eff, double m_eff, double alpha) {
    if (!(n_eff > 0.0) || !(m_eff > 0.0) || !(alpha > 0.0) || !(alpha < 1.0)) {
        throw std::invalid_argument("ks_critical_value needs positive sizes, alpha in (0,1)");
    }
    const double c = std::sqrt(-0.5 * std::log(0.5 * alpha));
    return c * std::sqrt((n_eff + m_eff) / (n_eff * m_eff));
}

double simpson(const std::function<double(double)>& f, double lo, double hi,
               int n_panels) {
    if (n_panels < 2 || n_panels % 2 != 0) {
        throw std::invalid_argument("n_panels must be even and >= 2");
    }
    const double h = (hi - lo) / n_panels;
    double sum = f(lo) + f(hi);
    for (int i = 1; i < n_panels; ++i) {
        sum += f(lo + h * i) * (i % 2 == 0 ? 2.0 : 4.0);
    }
    return sum * h / 3.0;
}

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw std::invalid_argument("need matched samples of size >= 2");
    }
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    return sxy / sxx;
}

}  // namespace collapse
