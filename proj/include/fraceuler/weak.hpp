#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "fraceuler/mc.hpp"
#include "fraceuler/quadrature.hpp"
#include "fraceuler/schemes.hpp"
#include "fraceuler/stats.hpp"

namespace fraceuler {

struct WeakErrorReport {
    std::vector<std::int64_t> ns;
    std::vector<double> n_delta;     // n * (E f(X_t) - E f(X^n_t)) under coupling
    std::vector<double> mc_stderr;   // standard error of each n_delta entry
    std::vector<std::int64_t> richardson_ns;
    std::vector<double> richardson_error;    // |E[f_ref - (2 f_{2n} - f_n)]|
    std::vector<double> richardson_stderr;
    double richardson_slope = 0.0;
    double predicted_limit = std::numeric_limits<double>::quiet_NaN();
    std::int64_t mc_paths = 0;
    std::uint64_t seed = 0;
};

struct WeakErrorSpec {
    CoefficientSystem system;
    HurstParam h{0.65};
    double t_horizon = 1.0;
    std::function<double(const Vec&)> f;
    double t = 1.0;
    std::vector<std::int64_t> ns;
    std::int64_t mc_paths = 10000;
    std::int64_t reference_refine = 64;
    std::uint64_t master_seed = 1;
    Vec x0;
};

/// Weak error of the modified scheme with common-random-number coupling:
/// E f(X_t) is estimated by the scheme on a reference_refine-times finer grid
/// driven by the same fBm path.
inline WeakErrorReport weak_error(const WeakErrorSpec& spec) {
    if (spec.ns.empty()) throw std::invalid_argument("weak_error: ns must be nonempty");
    const std::int64_t n_max = spec.ns.back();
    for (std::size_t i = 0; i < spec.ns.size(); ++i) {
        if (i > 0 && spec.ns[i] <= spec.ns[i - 1])
            throw std::invalid_argument("weak_error: ns must be strictly increasing");
        if (n_max % spec.ns[i] != 0)
            throw std::invalid_argument("weak_error: every n must divide the finest n");
    }
    const double frac = spec.t / spec.t_horizon;
    if (!(frac > 0.0) || frac > 1.0)
        throw std::invalid_argument("weak_error: t must lie in (0, T]");
    for (std::int64_t n : spec.ns) {
        const double idx = frac * static_cast<double>(n);
        if (std::abs(idx - std::round(idx)) > 1e-9)
            throw std::invalid_argument("weak_error: t must be a node of every coarse grid");
    }

    const std::int64_t fine_n = n_max * spec.reference_refine;
    const UniformGrid fine_grid(fine_n, spec.t_horizon);
    const CirculantFbmSampler sampler(fine_grid, spec.h, spec.system.m);
    const Vec x0 = spec.x0.empty() ? spec.system.default_x0 : spec.x0;
    const std::size_t levels = spec.ns.size();

    // Per-path f values: [path][level 0..levels-1, then reference at `levels`].
    std::vector<double> f_values(static_cast<std::size_t>(spec.mc_paths) * (levels + 1), 0.0);
    for_each_path(spec.mc_paths, [&](std::int64_t path) {
        const FbmPath fine = sampler.sample(derive_seed(spec.master_seed, path));
        double* slot = f_values.data() + static_cast<std::size_t>(path) * (levels + 1);
        for (std::size_t li = 0; li < levels; ++li) {
            const std::int64_t n = spec.ns[li];
            const FbmPath driver = coarsen(fine, fine_n / n);
            const SolutionPath approx = modified_euler(spec.system, driver, x0);
            const auto t_idx = static_cast<std::int64_t>(std::llround(frac * n));
            slot[li] = spec.f(approx.state(t_idx));
        }
        const SolutionPath ref = modified_euler(spec.system, fine, x0);
        const auto t_idx_fine = static_cast<std::int64_t>(std::llround(frac * fine_n));
        slot[levels] = spec.f(ref.state(t_idx_fine));
    });

    WeakErrorReport report;
    report.ns = spec.ns;
    report.mc_paths = spec.mc_paths;
    report.seed = spec.master_seed;

    std::vector<double> diffs(spec.mc_paths);
    for (std::size_t li = 0; li < levels; ++li) {
        for (std::int64_t path = 0; path < spec.mc_paths; ++path) {
            const double* slot = f_values.data() + static_cast<std::size_t>(path) * (levels + 1);
            diffs[static_cast<std::size_t>(path)] = slot[levels] - slot[li];
        }
        const double nd = static_cast<double>(spec.ns[li]);
        report.n_delta.push_back(nd * mean(diffs));
        report.mc_stderr.push_back(nd * stderr_of_mean(diffs));
    }

    // Richardson extrapolation over consecutive dyadic pairs (n, 2n).
    for (std::size_t li = 0; li + 1 < levels; ++li) {
        if (spec.ns[li + 1] != 2 * spec.ns[li]) continue;
        for (std::int64_t path = 0; path < spec.mc_paths; ++path) {
            const double* slot = f_values.data() + static_cast<std::size_t>(path) * (levels + 1);
            diffs[static_cast<std::size_t>(path)] =
                slot[levels] - (2.0 * slot[li + 1] - slot[li]);
        }
        report.richardson_ns.push_back(spec.ns[li]);
        report.richardson_error.push_back(std::abs(mean(diffs)));
        report.richardson_stderr.push_back(stderr_of_mean(diffs));
    }
    if (report.richardson_ns.size() >= 2)
        report.richardson_slope = fit_rate(report.richardson_ns, report.richardson_error).slope;
    return report;
}

/// Closed-form limit of n(E f(X_t) - E f(X^n_t)) for the geometric system with
/// f(x) = x: (alpha_H^2 T / 2) x0 e^{t^{2H}/2}
///           * int_0^t [(s^{2H-1} + (t-s)^{2H-1}) / (2H-1)]^2 ds.
inline double geometric_weak_limit(const HurstParam& h, double t_horizon, double t, double x0) {
    const double e1 = h.two_h() - 1.0;
    auto integrand = [&](double s) {
        const double v = (std::pow(s, e1) + std::pow(t - s, e1)) / e1;
        return v * v;
    };
    // Integrand is symmetric about t/2 with algebraic endpoint behavior.
    const double half = 0.5 * t;
    const double integral =
        2.0 * detail::dyadic_power_integral([&](double w) { return integrand(w); }, half, 0.0,
                                            integrand(0.0), 32);
    const double a2 = h.alpha() * h.alpha();
    return 0.5 * a2 * t_horizon * x0 * std::exp(0.5 * std::pow(t, h.two_h())) * integral;
}

}  // namespace fraceuler
