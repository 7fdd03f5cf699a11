#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace fraceuler {

inline double mean(const std::vector<double>& x) {
    double s = 0.0;
    for (double v : x) s += v;
    return s / static_cast<double>(x.size());
}

/// Unbiased sample variance.
inline double variance(const std::vector<double>& x) {
    if (x.size() < 2) throw std::invalid_argument("variance: need >= 2 samples");
    const double mu = mean(x);
    double s = 0.0;
    for (double v : x) s += (v - mu) * (v - mu);
    return s / static_cast<double>(x.size() - 1);
}

inline double central_moment4(const std::vector<double>& x) {
    const double mu = mean(x);
    double s = 0.0;
    for (double v : x) {
        const double d = v - mu;
        s += d * d * d * d;
    }
    return s / static_cast<double>(x.size());
}

inline double stderr_of_mean(const std::vector<double>& x) {
    return std::sqrt(variance(x) / static_cast<double>(x.size()));
}

/// Standard error of the sample variance, sqrt((m4 - var^2)/n); valid for
/// heavy-tailed samples where the Gaussian 2var^2/n rule understates noise.
inline double stderr_of_variance(const std::vector<double>& x) {
    const double v = variance(x);
    const double m4 = central_moment4(x);
    return std::sqrt(std::max(m4 - v * v, 0.0) / static_cast<double>(x.size()));
}

inline double t_statistic_zero_mean(const std::vector<double>& x) {
    return mean(x) / stderr_of_mean(x);
}

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

struct RateFit {
    double slope = 0.0;
    double stderr = 0.0;
};

/// Ordinary least squares of log(error) on log(n).
inline RateFit fit_rate(const std::vector<std::int64_t>& ns, const std::vector<double>& errors) {
    if (ns.size() != errors.size() || ns.size() < 2)
        throw std::invalid_argument("fit_rate: need >= 2 matching points");
    const std::size_t k = ns.size();
    std::vector<double> x(k), y(k);
    for (std::size_t i = 0; i < k; ++i) {
        if (ns[i] <= 0 || !(errors[i] > 0.0))
            throw std::invalid_argument("fit_rate: ns and errors must be positive");
        x[i] = std::log(static_cast<double>(ns[i]));
        y[i] = std::log(errors[i]);
    }
    const double xbar = mean(x), ybar = mean(y);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        sxx += (x[i] - xbar) * (x[i] - xbar);
        sxy += (x[i] - xbar) * (y[i] - ybar);
    }
    if (sxx == 0.0) throw std::invalid_argument("fit_rate: degenerate abscissae");
    RateFit fit;
    fit.slope = sxy / sxx;
    if (k == 2) return fit;
    double ssr = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        const double resid = y[i] - ybar - fit.slope * (x[i] - xbar);
        ssr += resid * resid;
    }
    fit.stderr = std::sqrt(ssr / (static_cast<double>(k - 2) * sxx));
    return fit;
}

/// Kolmogorov distribution tail Q(lambda) = 2 sum (-1)^{k-1} exp(-2 k^2 lambda^2).
inline double kolmogorov_pvalue(double lambda) {
    if (lambda < 1e-3) return 1.0;
    double sum = 0.0;
    for (int k = 1; k <= 101; ++k) {
        const double term = 2.0 * ((k % 2 == 1) ? 1.0 : -1.0) *
                            std::exp(-2.0 * k * k * lambda * lambda);
        sum += term;
        if (std::abs(term) < 1e-12) break;
    }
    return std::clamp(sum, 0.0, 1.0);
}

struct KsResult {
    double statistic = 0.0;
    double p_value = 1.0;
};

/// Two-sample Kolmogorov-Smirnov, asymptotic p-value.
inline KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    std::size_t ia = 0, ib = 0;
    double d = 0.0;
    while (ia < a.size() && ib < b.size()) {
        const double xa = a[ia], xb = b[ib];
        if (xa <= xb) ++ia;
        if (xb <= xa) ++ib;
        d = std::max(d, std::abs(static_cast<double>(ia) / na - static_cast<double>(ib) / nb));
    }
    KsResult res;
    res.statistic = d;
    const double ne = std::sqrt(na * nb / (na + nb));
    res.p_value = kolmogorov_pvalue((ne + 0.12 + 0.11 / ne) * d);
    return res;
}

/// One-sample KS against a callable CDF.
template <typename Cdf>
KsResult ks_one_sample(std::vector<double> a, Cdf&& cdf) {
    if (a.empty()) throw std::invalid_argument("ks_one_sample: empty sample");
    std::sort(a.begin(), a.end());
    const double n = static_cast<double>(a.size());
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double f = cdf(a[i]);
        d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
        d = std::max(d, std::abs(f - static_cast<double>(i) / n));
    }
    KsResult res;
    res.statistic = d;
    const double ne = std::sqrt(n);
    res.p_value = kolmogorov_pvalue((ne + 0.12 + 0.11 / ne) * d);
    return res;
}

/// Moment and KS comparison between a scaled-error sample and a simulated
/// limit sample.
struct DistributionComparison {
    double mean_errors = 0.0, mean_limit = 0.0;
    double var_errors = 0.0, var_limit = 0.0;
    double moment4_errors = 0.0, moment4_limit = 0.0;
    double ks_statistic = 0.0;
    double ks_p_value = 1.0;
};

/// Flat key = value rendering of a comparison, one line per field.
inline std::string to_kv_text(const DistributionComparison& cmp) {
    std::ostringstream out;
    out.precision(17);
    out << "mean_errors = " << cmp.mean_errors << "\n";
    out << "mean_limit = " << cmp.mean_limit << "\n";
    out << "var_errors = " << cmp.var_errors << "\n";
    out << "var_limit = " << cmp.var_limit << "\n";
    out << "moment4_errors = " << cmp.moment4_errors << "\n";
    out << "moment4_limit = " << cmp.moment4_limit << "\n";
    out << "ks_statistic = " << cmp.ks_statistic << "\n";
    out << "ks_p_value = " << cmp.ks_p_value << "\n";
    return out.str();
}

inline DistributionComparison compare_distributions(const std::vector<double>& scaled_errors,
                                                    const std::vector<double>& limit_sample) {
    if (scaled_errors.empty() || limit_sample.empty())
        throw std::invalid_argument("compare_distributions: empty sample");
    DistributionComparison cmp;
    cmp.mean_errors = mean(scaled_errors);
    cmp.mean_limit = mean(limit_sample);
    cmp.var_errors = scaled_errors.size() > 1 ? variance(scaled_errors) : 0.0;
    cmp.var_limit = limit_sample.size() > 1 ? variance(limit_sample) : 0.0;
    cmp.moment4_errors = central_moment4(scaled_errors);
    cmp.moment4_limit = central_moment4(limit_sample);
    const KsResult ks = ks_two_sample(scaled_errors, limit_sample);
    cmp.ks_statistic = ks.statistic;
    cmp.ks_p_value = ks.p_value;
    return cmp;
}

/// Pearson correlation.
inline double correlation(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size() || a.size() < 2)
        throw std::invalid_argument("correlation: need matching samples of size >= 2");
    const double ma = mean(a), mb = mean(b);
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    return sab / std::sqrt(saa * sbb);
}

}  // namespace fraceuler
