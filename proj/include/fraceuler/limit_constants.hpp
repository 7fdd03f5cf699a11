#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "fraceuler/core.hpp"
#include "fraceuler/quadrature.hpp"

namespace fraceuler {

/// Antiderivative kernel Phi(x) = |x|^{2H} / (2H(2H-1)); Phi'' = |x|^{2H-2}.
inline double phi(double x, const HurstParam& h) {
    const double th = h.two_h();
    return std::pow(std::abs(x), th) / (th * (th - 1.0));
}

/// integral over [a,b] x [c,d] of |u-v|^{2H-2} dv du, in closed form.
inline double rect_kernel_integral(double a, double b, double c, double d,
                                   const HurstParam& h) {
    if (a > b || c > d)
        throw std::invalid_argument("rect_kernel_integral: requires a <= b and c <= d");
    return phi(d - a, h) + phi(c - b, h) - phi(c - a, h) - phi(d - b, h);
}

struct QuadOptions {
    int order = 32;          // Gauss-Legendre nodes per axis
    double rel_tol = 1e-8;   // refinement agreement required between orders
    bool refine_check = true;
};

/// Odd antiderivative of phi: Phi1(x) = sign(x) |x|^{2H+1} / (2H(2H-1)(2H+1)).
inline double phi1(double x, const HurstParam& h) {
    const double th = h.two_h();
    const double mag = std::pow(std::abs(x), th + 1.0) / (th * (th - 1.0) * (th + 1.0));
    return x < 0.0 ? -mag : mag;
}

namespace detail {

enum class LagKind { Q, R };

// Every lag reduces to a 1-D integral: substituting w = s - t in the outer
// double integral gives  int |w|^{2H-2} G_p(w) dw  over w in [p-1, p+1], with
// t in [max(0, p-w), min(1, p+1-w)]. The inner t-integral of the rectangle
// kernel has a closed form through Phi1, so G_p is exact.
inline double lag_g_closed(double w, std::int64_t p, LagKind kind, const HurstParam& h) {
    const double pd = static_cast<double>(p);
    const double t_lo = std::max(0.0, pd - w);
    const double t_hi = std::min(1.0, pd + 1.0 - w);
    const double len = t_hi - t_lo;
    if (!(len > 0.0)) return 0.0;
    if (kind == LagKind::Q) {
        return (phi1(t_hi + w, h) - phi1(t_lo + w, h)) +
               (phi1(pd - t_lo, h) - phi1(pd - t_hi, h)) - (phi(pd, h) + phi(w, h)) * len;
    }
    return (phi(w, h) + phi(pd - 1.0, h)) * len - (phi1(pd - t_lo, h) - phi1(pd - t_hi, h)) -
           (phi1(t_hi + w - 1.0, h) - phi1(t_lo + w - 1.0, h));
}

inline double lag_value_unit(std::int64_t p, LagKind kind, const HurstParam& h, int order) {
    const double pd = static_cast<double>(p);
    const double expo = h.two_h() - 2.0;
    const double w_min = pd - 1.0, w_max = pd + 1.0;
    // Cut at the t-limit switch (w = p) and wherever a Phi1 argument can
    // change sign (w in {-1, 0, 1}); G is C^2 there but not analytic.
    std::vector<double> cuts = {w_min, w_max};
    for (double c : {pd, -1.0, 0.0, 1.0})
        if (c > w_min && c < w_max) cuts.push_back(c);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    auto g = [&](double w) { return lag_g_closed(w, p, kind, h); };
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double a = cuts[i], b = cuts[i + 1];
        if (a == 0.0) {
            total += dyadic_power_integral(g, b, expo, g(0.0), order);
        } else if (b == 0.0) {
            total += dyadic_power_integral([&](double w) { return g(-w); }, -a, expo, g(0.0),
                                           order);
        } else {
            total += integrate_gl([&](double w) { return std::pow(std::abs(w), expo) * g(w); },
                                  a, b, order);
        }
    }
    return total;
}

inline double lag_value(std::int64_t p, LagKind kind, const HurstParam& h, double t_horizon,
                        const QuadOptions& opt) {
    const double scale = std::pow(t_horizon, 2.0 * h.two_h());
    const double coarse = lag_value_unit(p, kind, h, opt.order);
    if (!opt.refine_check) return scale * coarse;
    const double fine = lag_value_unit(p, kind, h, opt.order + opt.order / 2);
    const double ref = std::max({std::abs(coarse), std::abs(fine), 1e-300});
    if (std::abs(fine - coarse) > opt.rel_tol * std::max(1.0, ref))
        throw QuadratureError("lag quadrature did not converge at p = " + std::to_string(p) +
                              ": " + std::to_string(coarse) + " vs " + std::to_string(fine));
    return scale * fine;
}

}  // namespace detail

/// Lag covariance block Q(p).
inline double qp(std::int64_t p, const HurstParam& h, double t_horizon = 1.0,
                 const QuadOptions& opt = {}) {
    return detail::lag_value(p, detail::LagKind::Q, h, t_horizon, opt);
}

/// Lag covariance block R(p).
inline double rp(std::int64_t p, const HurstParam& h, double t_horizon = 1.0,
                 const QuadOptions& opt = {}) {
    return detail::lag_value(p, detail::LagKind::R, h, t_horizon, opt);
}

/// Table of Q(p), R(p) over p in [-P, P].
struct BlockConstantTable {
    HurstParam h;
    double t_horizon;
    std::int64_t p_max;
    std::vector<double> qp_values;  // index p + p_max
    std::vector<double> rp_values;

    double q_at(std::int64_t p) const { return qp_values[static_cast<std::size_t>(p + p_max)]; }
    double r_at(std::int64_t p) const { return rp_values[static_cast<std::size_t>(p + p_max)]; }
};

inline BlockConstantTable build_block_table(const HurstParam& h, double t_horizon,
                                            std::int64_t p_max, const QuadOptions& opt = {}) {
    BlockConstantTable table{h, t_horizon, p_max, {}, {}};
    const auto size = static_cast<std::size_t>(2 * p_max + 1);
    table.qp_values.resize(size);
    table.rp_values.resize(size);
    // Far lags are smooth and cheap; no refinement doubling needed there once
    // the near lags have passed the convergence check.
    QuadOptions far = opt;
    far.refine_check = false;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (std::int64_t p = -p_max; p <= p_max; ++p) {
        const QuadOptions& o = (p >= -8 && p <= 8) ? opt : far;
        table.qp_values[static_cast<std::size_t>(p + p_max)] = qp(p, h, t_horizon, o);
        table.rp_values[static_cast<std::size_t>(p + p_max)] = rp(p, h, t_horizon, o);
    }
    return table;
}

enum class ConstantsMode { SeriesSum, LogLimit };

struct LimitConstants {
    HurstParam h;
    double t_horizon;
    double big_q;  // Q
    double big_r;  // R
    double q;      // alpha_H^2 Q / T^{4H}
    double r;      // alpha_H^2 R / T^{4H}
    ConstantsMode mode;
    double tail_estimate;      // tail mass added to each series (Q-units)
    double tail_uncertainty;   // residual error estimate in normalized q-units
    std::int64_t p_truncation;
};

namespace detail {

struct TailFit {
    double correction = 0.0;
    double uncertainty = 0.0;
};

// Power-law tail beyond P: values behave like c |p|^{4H-4}; c is fitted per
// sign with linear extrapolation in 1/p, the lag sum beyond P approximated by
// a midpoint integral.
inline TailFit fit_tail(const std::vector<double>& values, std::int64_t p_max, double decay_expo,
                        double scale_to_q) {
    const auto at = [&](std::int64_t p) {
        return values[static_cast<std::size_t>(p + p_max)];
    };
    const std::int64_t lo = std::max<std::int64_t>(p_max / 2, 8);
    const std::int64_t mid = (lo + p_max) / 2;

    double c_sum = 0.0, c_spread = 0.0;
    for (int sign = -1; sign <= 1; sign += 2) {
        double ca = 0.0, ua = 0.0, cb = 0.0, ub = 0.0;
        std::int64_t na = 0, nb = 0;
        for (std::int64_t p = lo; p <= p_max; ++p) {
            const double comp = at(sign * p) * std::pow(static_cast<double>(p), -decay_expo);
            if (p <= mid) {
                ca += comp;
                ua += 1.0 / static_cast<double>(p);
                ++na;
            } else {
                cb += comp;
                ub += 1.0 / static_cast<double>(p);
                ++nb;
            }
        }
        ca /= static_cast<double>(na);
        ua /= static_cast<double>(na);
        cb /= static_cast<double>(nb);
        ub /= static_cast<double>(nb);
        const double c_lin = cb + (cb - ca) * ub / (ua - ub);  // extrapolate 1/p -> 0
        c_sum += c_lin;
        c_spread += std::abs(c_lin - cb);
    }

    // sum_{p > P} p^{4H-4} via midpoint integral, with the plain integral as
    // an error scale.
    const double s = decay_expo;  // 4H-4 in (-2, -1)
    const double i_mid = std::pow(static_cast<double>(p_max) + 0.5, s + 1.0) / (-(s + 1.0));
    const double i_plain = std::pow(static_cast<double>(p_max), s + 1.0) / (-(s + 1.0));

    TailFit fit;
    fit.correction = c_sum * i_mid;
    fit.uncertainty = scale_to_q * (c_spread * i_mid + c_sum * std::abs(i_mid - i_plain));
    return fit;
}

}  // namespace detail

/// Constants Q, R (and normalized q, r) for H <= 3/4. For H < 3/4 the series
/// over lags is summed to |p| <= P with a fitted power-law tail correction,
/// growing P adaptively until the estimated residual is below `tolerance`
/// (in q-units). H = 3/4 is detected within 1e-12 and routed to the closed
/// form Q = R = T^{4H}/2.
inline LimitConstants limit_constants(const HurstParam& h, double t_horizon,
                                      std::int64_t truncation = 512, double tolerance = 1e-4,
                                      const QuadOptions& opt = {},
                                      std::int64_t p_cap = 8192) {
    const double t4h = std::pow(t_horizon, 2.0 * h.two_h());
    const double norm = h.alpha() * h.alpha() / t4h;
    if (h.is_three_quarters()) {
        const double closed = 0.5 * t4h;
        return {h, t_horizon, closed, closed, norm * closed, norm * closed,
                ConstantsMode::LogLimit, 0.0, 0.0, 0};
    }
    if (h.value() > 0.75)
        throw std::invalid_argument(
            "limit_constants: series representation requires H <= 3/4; for H > 3/4 the error "
            "scale is n and the Rosenblatt constant c_H applies");

    std::int64_t p_max = std::max<std::int64_t>(truncation, 64);
    const double decay = 2.0 * h.two_h() - 4.0;  // 4H - 4
    for (;;) {
        const BlockConstantTable table = build_block_table(h, t_horizon, p_max, opt);
        double sum_q = 0.0, sum_r = 0.0;
        for (std::int64_t p = -p_max; p <= p_max; ++p) {
            sum_q += table.q_at(p);
            sum_r += table.r_at(p);
        }
        const auto tail_q = detail::fit_tail(table.qp_values, p_max, decay, norm);
        const auto tail_r = detail::fit_tail(table.rp_values, p_max, decay, norm);
        const double uncertainty = std::max(tail_q.uncertainty, tail_r.uncertainty);
        if (uncertainty <= tolerance) {
            const double big_q = sum_q + tail_q.correction;
            const double big_r = sum_r + tail_r.correction;
            if (!(big_q > 0.0) || big_r < -tolerance / norm)
                throw QuadratureError("limit_constants: computed constants out of range (Q = " +
                                      std::to_string(big_q) + ", R = " + std::to_string(big_r) +
                                      ")");
            if (big_r > big_q + tolerance / norm + 1e-12)
                throw QuadratureError("limit_constants: R > Q beyond tolerance, quadrature bug");
            return {h,
                    t_horizon,
                    big_q,
                    big_r,
                    norm * big_q,
                    norm * big_r,
                    ConstantsMode::SeriesSum,
                    tail_q.correction,
                    uncertainty,
                    p_max};
        }
        if (2 * p_max > p_cap)
            throw ToleranceError("limit_constants: tail uncertainty " +
                                 std::to_string(uncertainty) + " above tolerance " +
                                 std::to_string(tolerance) + " at truncation cap P = " +
                                 std::to_string(p_max));
        p_max *= 2;
    }
}

/// Diagnostic for the H = 3/4 regime: sum_{|p|<=P} Q(p) / log(P).
inline double partial_sum_log_ratio(const HurstParam& h, double t_horizon, std::int64_t p_max,
                                    const QuadOptions& opt = {}) {
    const BlockConstantTable table = build_block_table(h, t_horizon, p_max, opt);
    double sum_q = 0.0;
    for (std::int64_t p = -p_max; p <= p_max; ++p) sum_q += table.q_at(p);
    return sum_q / std::log(static_cast<double>(p_max));
}

/// Variance constant of the generalized Rosenblatt limit: c_H = T^2 H^2 (2H-1) / (4(4H-3)).
inline double c_h(const HurstParam& h, double t_horizon) {
    if (!(h.value() > 0.75))
        throw std::domain_error("c_h: defined only for H > 3/4 (pole at 4H = 3)");
    const double hh = h.value();
    return t_horizon * t_horizon * hh * hh * (2.0 * hh - 1.0) / (4.0 * (4.0 * hh - 3.0));
}

}  // namespace fraceuler
