#pragma once

#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fraceuler/config.hpp"
#include "fraceuler/limit_solutions.hpp"
#include "fraceuler/rates.hpp"
#include "fraceuler/rosenblatt.hpp"
#include "fraceuler/svg.hpp"
#include "fraceuler/weak.hpp"
#include "fraceuler/zeta.hpp"

namespace fraceuler {

struct ExperimentOutcome {
    ResultTable table;
    bool tolerance_ok = true;
    std::string summary;
    std::optional<PlotSpec> plot;
};

namespace detail {

inline std::vector<std::int64_t> default_ns(const ExperimentConfig& cfg,
                                            std::vector<std::int64_t> fallback) {
    return cfg.ns.empty() ? std::move(fallback) : cfg.ns;
}

inline ResultTable make_table(const ExperimentConfig& cfg, std::vector<std::string> schema) {
    ResultTable table;
    table.schema = std::move(schema);
    table.metadata.config_hash = cfg.hash();
    table.metadata.seed = cfg.master_seed;
    return table;
}

}  // namespace detail

inline ExperimentOutcome run_constants(const ExperimentConfig& cfg) {
    ExperimentOutcome out;
    out.table = detail::make_table(
        cfg, {"H", "T", "P", "Q", "R", "q", "r", "tail_estimate", "mode"});
    std::vector<double> hs = cfg.h_list.empty() ? std::vector<double>{cfg.h} : cfg.h_list;
    std::ostringstream summary;
    for (double hv : hs) {
        const HurstParam h(hv);
        const LimitConstants lc =
            limit_constants(h, cfg.t_horizon, cfg.p_truncation, cfg.tolerance);
        out.table.add_row({Cell::number(hv), Cell::number(cfg.t_horizon),
                           Cell::of_int(lc.p_truncation), Cell::number(lc.big_q),
                           Cell::number(lc.big_r), Cell::number(lc.q), Cell::number(lc.r),
                           Cell::number(lc.tail_estimate),
                           Cell::of_text(lc.mode == ConstantsMode::SeriesSum ? "SeriesSum"
                                                                             : "LogLimit")});
        summary << "H=" << hv << ": q=" << lc.q << " r=" << lc.r << "\n";
    }
    out.summary = summary.str();
    if (hs.size() > 1) {
        PlotSpec plot;
        plot.x_column = "H";
        plot.y_columns = {"q", "r"};
        plot.title = "limit constants q, r vs H";
        out.plot = plot;
    }
    return out;
}

namespace detail {

/// Mean relative gap between n^{2H-1}(X_T - X^n_T) for the naive scheme and
/// the limit functional (T^{2H-1} T / 2) X_T of the geometric system.
inline double naive_limit_gap(const ExperimentConfig& cfg, std::int64_t n,
                              std::int64_t mc_paths) {
    const HurstParam h(cfg.h);
    const CoefficientSystem sys = coefficient_system("geometric");
    const UniformGrid grid(n, cfg.t_horizon);
    const CirculantFbmSampler sampler(grid, h, 1);
    const double scale = std::pow(static_cast<double>(n), h.two_h() - 1.0);
    const double factor = 0.5 * std::pow(cfg.t_horizon, h.two_h());
    std::vector<double> gap(static_cast<std::size_t>(mc_paths));
    std::vector<double> magnitude(static_cast<std::size_t>(mc_paths));
    for_each_path(mc_paths, [&](std::int64_t path) {
        const FbmPath driver = sampler.sample(derive_seed(cfg.master_seed ^ 0x6A17E5ULL, path));
        const SolutionPath exact = exact_geometric(driver, 1.0);
        const SolutionPath approx = naive_euler(sys, driver, {1.0});
        const double x_t = exact.value(n, 0);
        const double functional = factor * x_t;
        const double scaled_err = scale * (x_t - approx.value(n, 0));
        gap[static_cast<std::size_t>(path)] = std::abs(scaled_err - functional);
        magnitude[static_cast<std::size_t>(path)] = std::abs(functional);
    });
    return mean(gap) / mean(magnitude);
}

}  // namespace detail

inline ExperimentOutcome run_strong_rate(const ExperimentConfig& cfg, SchemeKind scheme) {
    StrongErrorSpec spec;
    spec.system = coefficient_system(cfg.system);
    spec.h = HurstParam(cfg.h);
    spec.t_horizon = cfg.t_horizon;
    spec.ns = detail::default_ns(cfg, {16, 32, 64, 128, 256, 512, 1024});
    spec.mc_paths = cfg.mc_paths;
    spec.p_moment = cfg.p_moment;
    spec.scheme = scheme;
    spec.oracle = cfg.system == "geometric" ? OracleKind::Exact : OracleKind::FineReference;
    spec.master_seed = cfg.master_seed;
    const RateReport report = strong_error(spec);

    const bool naive = scheme == SchemeKind::Naive;
    double expected;
    if (naive) {
        expected = -(cfg.h * 2.0 - 1.0);
    } else {
        // effective log-log slope of gamma_n^{-1} over the measured range
        // (handles the sqrt(log n) factor at H = 3/4)
        const HurstParam h(cfg.h);
        expected = -(std::log(gamma_n(spec.ns.back(), h)) -
                     std::log(gamma_n(spec.ns.front(), h))) /
                   (std::log(static_cast<double>(spec.ns.back())) -
                    std::log(static_cast<double>(spec.ns.front())));
    }

    ExperimentOutcome out;
    std::vector<std::string> schema = {"n", "lp_error", "slope", "slope_stderr"};
    double gap = std::numeric_limits<double>::quiet_NaN();
    if (naive && cfg.system == "geometric") {
        schema.push_back("limit_rel_gap");
        gap = detail::naive_limit_gap(cfg, report.ns.back(),
                                      std::min<std::int64_t>(cfg.mc_paths, 2000));
    }
    out.table = detail::make_table(cfg, schema);
    for (std::size_t i = 0; i < report.ns.size(); ++i) {
        std::vector<Cell> row = {Cell::of_int(report.ns[i]), Cell::number(report.errors[i]),
                                 Cell::number(report.slope), Cell::number(report.slope_stderr)};
        if (naive && cfg.system == "geometric") row.push_back(Cell::number(gap));
        out.table.add_row(std::move(row));
    }
    out.tolerance_ok = std::abs(report.slope - expected) <= cfg.slope_tolerance;
    std::ostringstream summary;
    summary << (naive ? "naive" : "modified") << " scheme slope " << report.slope
            << " (expected " << expected << " +- " << cfg.slope_tolerance << ")";
    if (naive && cfg.system == "geometric") summary << ", limit gap " << gap;
    out.summary = summary.str();
    PlotSpec plot;
    plot.x_column = "n";
    plot.y_columns = {"lp_error"};
    plot.log_x = plot.log_y = true;
    plot.title = std::string(naive ? "naive" : "modified") + " scheme strong error";
    out.plot = plot;
    return out;
}

/// CLT regime check (H <= 3/4, geometric system): empirical variance of
/// gamma_n (X_T - X^n_T) against E[X_T^2] alpha_H^2 (Q+R), plus a two-sample
/// KS test against simulated U_T.
inline ExperimentOutcome run_clt_check(const ExperimentConfig& cfg) {
    if (cfg.system != "geometric")
        throw std::invalid_argument("clt_check: implemented for the geometric system");
    if (cfg.h > 0.75)
        throw std::invalid_argument("clt_check: requires H <= 3/4");
    const HurstParam h(cfg.h);
    const std::int64_t n = detail::default_ns(cfg, {1024}).back();
    const double t_hor = cfg.t_horizon;
    const CoefficientSystem sys = coefficient_system("geometric");
    const LimitConstants lc = limit_constants(h, t_hor, cfg.p_truncation, cfg.tolerance);
    const UniformGrid grid(n, t_hor);
    const CirculantFbmSampler sampler(grid, h, 1);
    const double gn = gamma_n(n, h);
    const double x0 = 1.0;

    std::vector<double> scaled_err(static_cast<std::size_t>(cfg.mc_paths));
    std::vector<double> limit_sample(static_cast<std::size_t>(cfg.mc_paths));
    MatrixBmSpec wspec{1, lc};
    for_each_path(cfg.mc_paths, [&](std::int64_t path) {
        {
            const FbmPath driver = sampler.sample(derive_seed(cfg.master_seed, path));
            const SolutionPath exact = exact_geometric(driver, x0);
            const SolutionPath approx = modified_euler(sys, driver, {x0});
            scaled_err[static_cast<std::size_t>(path)] =
                gn * (exact.value(n, 0) - approx.value(n, 0));
        }
        {
            const std::uint64_t seed2 = derive_seed(cfg.master_seed ^ 0xC17D631ULL, path);
            const FbmPath driver = sampler.sample(seed2);
            const SolutionPath x_path = modified_euler(sys, driver, {x0});
            const VariationalPair vp = solve_variational(sys, driver, x_path);
            const MatrixBmPath w = sample_matrix_bm(wspec, grid, derive_seed(seed2, 0x7FULL));
            const std::vector<Vec> u = clt_limit_solution(sys, x_path, vp, w);
            limit_sample[static_cast<std::size_t>(path)] = u.back()[0];
        }
    });

    const double var_emp = variance(scaled_err);
    const double var_pred = x0 * x0 * std::exp(2.0 * std::pow(t_hor, h.two_h())) * (lc.q + lc.r) *
                            std::pow(t_hor, 2.0 * h.two_h());
    const KsResult ks = ks_two_sample(scaled_err, limit_sample);
    const double ratio = var_emp / var_pred;
    const double var_tol = cfg.var_tolerance.value_or(0.15);

    ExperimentOutcome out;
    out.table = detail::make_table(
        cfg, {"h", "n", "mc_paths", "var_emp", "var_pred", "ratio", "var_limit_sample",
              "ks_stat", "ks_p"});
    out.table.add_row({Cell::number(cfg.h), Cell::of_int(n), Cell::of_int(cfg.mc_paths),
                       Cell::number(var_emp), Cell::number(var_pred), Cell::number(ratio),
                       Cell::number(variance(limit_sample)), Cell::number(ks.statistic),
                       Cell::number(ks.p_value)});
    out.tolerance_ok = std::abs(ratio - 1.0) <= var_tol && ks.p_value > 0.001;
    std::ostringstream summary;
    summary << "Var(gamma_n error) = " << var_emp << " vs predicted " << var_pred << " (ratio "
            << ratio << "), KS p = " << ks.p_value;
    out.summary = summary.str();
    return out;
}

/// Exact finite-n variance of Z^{12}_n(T) from the lag quadrature:
/// alpha_H^2 n^{3-4H} sum_{|p|<n} (1 - |p|/n) Q(p), the tail of the sum taken
/// from the fitted power law.
inline double rosenblatt_finite_n_variance(const HurstParam& h, double t_horizon,
                                           std::int64_t n, std::int64_t p_cut = 1024) {
    const std::int64_t cut = std::min<std::int64_t>(n - 1, p_cut);
    const BlockConstantTable table = build_block_table(h, t_horizon, cut);
    double sum = 0.0;
    for (std::int64_t p = -cut; p <= cut; ++p)
        sum += (1.0 - std::abs(static_cast<double>(p)) / static_cast<double>(n)) * table.q_at(p);
    if (cut < n - 1) {
        // tail: c * [sum_{cut<p<n} p^{4H-4} (1 - p/n)] for both signs
        const double s = 2.0 * h.two_h() - 4.0;
        double c_plus = 0.0, c_minus = 0.0;
        std::int64_t count = 0;
        for (std::int64_t p = cut / 2; p <= cut; ++p) {
            c_plus += table.q_at(p) * std::pow(static_cast<double>(p), -s);
            c_minus += table.q_at(-p) * std::pow(static_cast<double>(p), -s);
            ++count;
        }
        c_plus /= static_cast<double>(count);
        c_minus /= static_cast<double>(count);
        const double a = static_cast<double>(cut) + 0.5, b = static_cast<double>(n);
        const double i1 = (std::pow(b, s + 1.0) - std::pow(a, s + 1.0)) / (s + 1.0);
        const double i2 = (std::pow(b, s + 2.0) - std::pow(a, s + 2.0)) / ((s + 2.0) * b);
        sum += (c_plus + c_minus) * (i1 - i2);
    }
    const double a2 = h.alpha() * h.alpha();
    return a2 * std::pow(static_cast<double>(n), 3.0 - 2.0 * h.two_h()) * sum;
}

inline ExperimentOutcome run_rosenblatt_check(const ExperimentConfig& cfg) {
    if (!(cfg.h > 0.75))
        throw std::invalid_argument("rosenblatt_check: requires H > 3/4");
    const HurstParam h(cfg.h);
    const std::int64_t n = detail::default_ns(cfg, {4096}).back();
    const std::int64_t sub = cfg.sub_factor;
    const UniformGrid fine_grid(n * sub, cfg.t_horizon);
    const CirculantFbmSampler sampler(fine_grid, h, 2);

    std::vector<double> z_t(static_cast<std::size_t>(cfg.mc_paths));
    for_each_path(cfg.mc_paths, [&](std::int64_t path) {
        const FbmPath fine = sampler.sample(derive_seed(cfg.master_seed, path));
        const std::vector<double> z = sample_rosenblatt_approx(fine, 0, 1, sub);
        z_t[static_cast<std::size_t>(path)] = z.back();
    });

    const double var_emp = variance(z_t);
    const double target =
        c_h(h, cfg.t_horizon) * std::pow(cfg.t_horizon, 2.0 * h.two_h() - 2.0);
    const double finite_n = rosenblatt_finite_n_variance(h, cfg.t_horizon, n);
    const double ratio = var_emp / target;
    const double var_tol = cfg.var_tolerance.value_or(0.05);

    ExperimentOutcome out;
    out.table = detail::make_table(cfg, {"h", "n", "sub_factor", "mc_paths", "var_emp",
                                         "var_limit", "var_finite_n", "ratio"});
    out.table.add_row({Cell::number(cfg.h), Cell::of_int(n), Cell::of_int(sub),
                       Cell::of_int(cfg.mc_paths), Cell::number(var_emp), Cell::number(target),
                       Cell::number(finite_n), Cell::number(ratio)});
    out.tolerance_ok = std::abs(ratio - 1.0) <= var_tol;
    std::ostringstream summary;
    summary << "Var(Z^{12}_n(T)) = " << var_emp << " vs limit " << target << " (finite-n "
            << finite_n << ", ratio " << ratio << ")";
    out.summary = summary.str();
    return out;
}

inline ExperimentOutcome run_weak_error(const ExperimentConfig& cfg) {
    if (cfg.system != "geometric")
        throw std::invalid_argument("weak_error: closed-form limit needs the geometric system");
    WeakErrorSpec spec;
    spec.system = coefficient_system(cfg.system);
    spec.h = HurstParam(cfg.h);
    spec.t_horizon = cfg.t_horizon;
    spec.t = cfg.t_horizon;
    spec.f = [](const Vec& x) { return x[0]; };
    spec.ns = detail::default_ns(cfg, {8, 16, 32, 64, 128, 512});
    spec.mc_paths = cfg.mc_paths;
    spec.reference_refine = cfg.reference_refine;
    spec.master_seed = cfg.master_seed;
    WeakErrorReport report = weak_error(spec);
    report.predicted_limit = geometric_weak_limit(spec.h, cfg.t_horizon, spec.t, 1.0);

    ExperimentOutcome out;
    out.table = detail::make_table(
        cfg, {"n", "n_delta", "mc_stderr", "predicted_limit", "richardson_error",
              "richardson_stderr", "richardson_slope"});
    for (std::size_t i = 0; i < report.ns.size(); ++i) {
        double rich = std::numeric_limits<double>::quiet_NaN();
        double rich_se = std::numeric_limits<double>::quiet_NaN();
        for (std::size_t rj = 0; rj < report.richardson_ns.size(); ++rj)
            if (report.richardson_ns[rj] == report.ns[i]) {
                rich = report.richardson_error[rj];
                rich_se = report.richardson_stderr[rj];
            }
        out.table.add_row({Cell::of_int(report.ns[i]), Cell::number(report.n_delta[i]),
                           Cell::number(report.mc_stderr[i]),
                           Cell::number(report.predicted_limit), Cell::number(rich),
                           Cell::number(rich_se), Cell::number(report.richardson_slope)});
    }
    const double band = 2.0 * report.mc_stderr.back() + 1e-3 * std::abs(report.predicted_limit);
    const bool band_ok =
        std::abs(report.n_delta.back() - report.predicted_limit) <= band;
    const bool slope_ok = report.richardson_ns.size() < 2 || report.richardson_slope < -1.2;
    out.tolerance_ok = band_ok && slope_ok;
    std::ostringstream summary;
    summary << "n*Delta_n at n=" << report.ns.back() << ": " << report.n_delta.back() << " +- "
            << report.mc_stderr.back() << " vs limit " << report.predicted_limit
            << "; Richardson slope " << report.richardson_slope;
    out.summary = summary.str();
    PlotSpec plot;
    plot.x_column = "n";
    plot.y_columns = {"n_delta", "predicted_limit"};
    plot.log_x = true;
    plot.title = "weak error n(E f(X_T) - E f(X^n_T))";
    out.plot = plot;
    return out;
}

inline ExperimentOutcome run_weighted_sums(const ExperimentConfig& cfg) {
    const HurstParam h(cfg.h);
    const std::int64_t n = detail::default_ns(cfg, {1024}).back();
    const std::int64_t sub = cfg.sub_factor;
    const UniformGrid fine_grid(n * sub, cfg.t_horizon);
    const CirculantFbmSampler sampler(fine_grid, h, 1);
    const std::vector<double> f_one(static_cast<std::size_t>(n + 1), 1.0);

    std::vector<double> sums(static_cast<std::size_t>(cfg.mc_paths));
    std::vector<double> identity_residual(static_cast<std::size_t>(cfg.mc_paths), 0.0);
    for_each_path(cfg.mc_paths, [&](std::int64_t path) {
        const FbmPath fine = sampler.sample(derive_seed(cfg.master_seed, path));
        sums[static_cast<std::size_t>(path)] =
            weighted_sum_check(fine, f_one, WeightMode::TimeWeight, sub);
        if (path < 4) {
            const auto zt = weighted_blocks(fine, sub, WeightMode::TimeWeight);
            const auto zi = weighted_blocks(fine, sub, WeightMode::IncrementWeight);
            double worst = 0.0;
            const double dt = cfg.t_horizon / static_cast<double>(n);
            for (std::int64_t k = 0; k < n; ++k) {
                const double db =
                    fine.value(0, (k + 1) * sub) - fine.value(0, k * sub);
                worst = std::max(worst, std::abs(zt[static_cast<std::size_t>(k)] +
                                                 zi[static_cast<std::size_t>(k)] - dt * db));
            }
            identity_residual[static_cast<std::size_t>(path)] = worst;
        }
    });

    const double var_emp = variance(sums);
    const double var_pred = cfg.t_horizon * cfg.t_horizon / 4.0 *
                            std::pow(cfg.t_horizon, h.two_h());
    const double ratio = var_emp / var_pred;
    double residual = 0.0;
    for (double r : identity_residual) residual = std::max(residual, r);
    const double var_tol = cfg.var_tolerance.value_or(0.05);

    ExperimentOutcome out;
    out.table = detail::make_table(cfg, {"h", "n", "sub_factor", "mc_paths", "var_emp",
                                         "var_pred", "ratio", "identity_residual"});
    out.table.add_row({Cell::number(cfg.h), Cell::of_int(n), Cell::of_int(sub),
                       Cell::of_int(cfg.mc_paths), Cell::number(var_emp), Cell::number(var_pred),
                       Cell::number(ratio), Cell::number(residual)});
    out.tolerance_ok = std::abs(ratio - 1.0) <= var_tol && residual <= 1e-12;
    std::ostringstream summary;
    summary << "Var(n sum zeta) = " << var_emp << " vs (T^2/4) T^{2H} = " << var_pred
            << " (ratio " << ratio << "), identity residual " << residual;
    out.summary = summary.str();
    return out;
}

inline ExperimentOutcome run_experiment(const ExperimentConfig& cfg) {
    validate_config(cfg);
    if (cfg.experiment == "constants") return run_constants(cfg);
    if (cfg.experiment == "strong_rate") return run_strong_rate(cfg, SchemeKind::Modified);
    if (cfg.experiment == "naive_rate") return run_strong_rate(cfg, SchemeKind::Naive);
    if (cfg.experiment == "clt_check") return run_clt_check(cfg);
    if (cfg.experiment == "rosenblatt_check") return run_rosenblatt_check(cfg);
    if (cfg.experiment == "weak_error") return run_weak_error(cfg);
    if (cfg.experiment == "weighted_sums") return run_weighted_sums(cfg);
    throw ConfigError("run_experiment: unknown experiment '" + cfg.experiment + "'");
}

/// Covariance structure of the Theta blocks (same-block limits and cross-block
/// vanishing); used by the acceptance suite.
struct ThetaCovarianceResult {
    double max_rel_err_nonzero = 0.0;  // same-block entries with nonzero prediction
    double max_t_zero = 0.0;           // same-block entries predicted zero
    double max_t_cross = 0.0;          // cross-block entries
    std::int64_t mc_paths = 0;
};

inline ThetaCovarianceResult theta_covariance_check(const HurstParam& h, double t_horizon,
                                                    std::int64_t n, std::int64_t sub_factor,
                                                    int blocks_l, std::int64_t mc_paths,
                                                    std::uint64_t master_seed,
                                                    const LimitConstants& lc) {
    const int m = 2;
    const UniformGrid fine_grid(n * sub_factor, t_horizon);
    const CirculantFbmSampler sampler(fine_grid, h, m);
    std::vector<std::int64_t> breaks;
    for (int l = 0; l < blocks_l; ++l) breaks.push_back(l * n / blocks_l);
    breaks.push_back(n - 1);

    const std::size_t per_path = static_cast<std::size_t>(blocks_l) * m * m;
    std::vector<double> theta(static_cast<std::size_t>(mc_paths) * per_path);
    for_each_path(mc_paths, [&](std::int64_t path) {
        const FbmPath fine = sampler.sample(derive_seed(master_seed, path));
        const auto blocks = theta_blocks(fine, sub_factor, breaks);
        double* slot = theta.data() + static_cast<std::size_t>(path) * per_path;
        for (int l = 0; l < blocks_l; ++l)
            for (int ij = 0; ij < m * m; ++ij)
                slot[static_cast<std::size_t>(l) * m * m + ij] =
                    blocks[static_cast<std::size_t>(l)][static_cast<std::size_t>(ij)];
    });

    auto entry = [&](std::int64_t path, int l, int i, int j) {
        return theta[static_cast<std::size_t>(path) * per_path +
                     static_cast<std::size_t>(l) * m * m + static_cast<std::size_t>(i) * m + j];
    };
    const double a2 = h.alpha() * h.alpha();
    const double dr = t_horizon / static_cast<double>(blocks_l);

    ThetaCovarianceResult res;
    res.mc_paths = mc_paths;
    std::vector<double> products(static_cast<std::size_t>(mc_paths));
    const int l_same = 1;       // interior block
    const int l_a = 0, l_b = 2;  // disjoint blocks for the cross check
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            for (int ip = 0; ip < m; ++ip)
                for (int jp = 0; jp < m; ++jp) {
                    const double pred = a2 * dr / t_horizon *
                                        ((j == ip && i == jp ? lc.big_r : 0.0) +
                                         (j == jp && i == ip ? lc.big_q : 0.0));
                    for (std::int64_t path = 0; path < mc_paths; ++path)
                        products[static_cast<std::size_t>(path)] =
                            entry(path, l_same, i, j) * entry(path, l_same, ip, jp);
                    const double cov = mean(products);
                    const double se = stderr_of_mean(products);
                    if (pred != 0.0) {
                        res.max_rel_err_nonzero =
                            std::max(res.max_rel_err_nonzero, std::abs(cov - pred) / pred);
                    } else {
                        res.max_t_zero = std::max(res.max_t_zero, std::abs(cov / se));
                    }
                    for (std::int64_t path = 0; path < mc_paths; ++path)
                        products[static_cast<std::size_t>(path)] =
                            entry(path, l_a, i, j) * entry(path, l_b, ip, jp);
                    res.max_t_cross =
                        std::max(res.max_t_cross, std::abs(t_statistic_zero_mean(products)));
                }
    return res;
}

}  // namespace fraceuler
