#pragma once

#include <cstdint>
#include <vector>

#include "fraceuler/mc.hpp"
#include "fraceuler/schemes.hpp"
#include "fraceuler/stats.hpp"

namespace fraceuler {

enum class OracleKind { Exact, FineReference };

struct RateReport {
    std::vector<std::int64_t> ns;
    std::vector<double> errors;  // sup over nodes of the per-node Monte Carlo L^p norm
    int p_moment = 2;
    double slope = 0.0;
    double slope_stderr = 0.0;
    std::int64_t mc_paths = 0;
    std::uint64_t seed = 0;
};

struct StrongErrorSpec {
    CoefficientSystem system;
    HurstParam h{0.7};
    double t_horizon = 1.0;
    std::vector<std::int64_t> ns;
    std::int64_t mc_paths = 1000;
    int p_moment = 2;
    OracleKind oracle = OracleKind::Exact;
    SchemeKind scheme = SchemeKind::Modified;
    std::uint64_t master_seed = 1;
    Vec x0;
    std::int64_t reference_refine = 16;  // used when oracle = FineReference
};

/// Coupled strong-error measurement: one driver per path at the finest
/// resolution; every coarse level sees exactly the subsampled fine path.
inline RateReport strong_error(const StrongErrorSpec& spec) {
    if (spec.ns.empty()) throw std::invalid_argument("strong_error: ns must be nonempty");
    std::vector<std::int64_t> ns = spec.ns;
    for (std::size_t i = 1; i < ns.size(); ++i)
        if (ns[i] <= ns[i - 1])
            throw std::invalid_argument("strong_error: ns must be strictly increasing");
    const std::int64_t n_max = ns.back();
    for (std::int64_t n : ns)
        if (n_max % n != 0)
            throw std::invalid_argument("strong_error: every n must divide the finest n");
    if (spec.oracle == OracleKind::Exact && spec.system.name != "geometric")
        throw std::invalid_argument(
            "strong_error: exact oracle is only available for the geometric system");

    const std::int64_t fine_n =
        spec.oracle == OracleKind::FineReference ? n_max * spec.reference_refine : n_max;
    const UniformGrid fine_grid(fine_n, spec.t_horizon);
    const CirculantFbmSampler sampler(fine_grid, spec.h, spec.system.m);
    const Vec x0 = spec.x0.empty() ? spec.system.default_x0 : spec.x0;

    // Per-path |error|^p per node, accumulated afterwards in path order.
    std::vector<std::int64_t> offsets(ns.size() + 1, 0);
    for (std::size_t li = 0; li < ns.size(); ++li) offsets[li + 1] = offsets[li] + ns[li] + 1;
    const std::int64_t total_nodes = offsets.back();
    std::vector<double> pow_err(static_cast<std::size_t>(spec.mc_paths * total_nodes), 0.0);

    for_each_path(spec.mc_paths, [&](std::int64_t path) {
        const FbmPath fine = sampler.sample(derive_seed(spec.master_seed, path));
        double* slot = pow_err.data() + static_cast<std::size_t>(path * total_nodes);
        for (std::size_t li = 0; li < ns.size(); ++li) {
            const std::int64_t n = ns[li];
            const FbmPath driver = coarsen(fine, fine_n / n);
            const SolutionPath approx = spec.scheme == SchemeKind::Modified
                                            ? modified_euler(spec.system, driver, x0)
                                            : naive_euler(spec.system, driver, x0);
            const SolutionPath truth =
                spec.oracle == OracleKind::Exact
                    ? exact_geometric(driver, x0[0])
                    : reference_solution(spec.system, fine, x0, n);
            for (std::int64_t i = 0; i <= n; ++i) {
                double diff = 0.0;
                for (int c = 0; c < spec.system.d; ++c)
                    diff = std::max(diff, std::abs(truth.value(i, c) - approx.value(i, c)));
                slot[offsets[li] + i] = std::pow(diff, spec.p_moment);
            }
        }
    });

    RateReport report;
    report.ns = ns;
    report.p_moment = spec.p_moment;
    report.mc_paths = spec.mc_paths;
    report.seed = spec.master_seed;
    report.errors.resize(ns.size());
    for (std::size_t li = 0; li < ns.size(); ++li) {
        double worst = 0.0;
        for (std::int64_t i = 0; i <= ns[li]; ++i) {
            double acc = 0.0;
            for (std::int64_t path = 0; path < spec.mc_paths; ++path)
                acc += pow_err[static_cast<std::size_t>(path * total_nodes + offsets[li] + i)];
            worst = std::max(worst, acc / static_cast<double>(spec.mc_paths));
        }
        report.errors[li] = std::pow(worst, 1.0 / spec.p_moment);
    }
    const RateFit fit = fit_rate(report.ns, report.errors);
    report.slope = fit.slope;
    report.slope_stderr = fit.stderr;
    return report;
}

}  // namespace fraceuler
