#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

namespace fraceuler::detail {

struct GlRule {
    std::vector<double> nodes;    // on (-1, 1)
    std::vector<double> weights;
};

/// Gauss-Legendre rule of given order, computed by Newton iteration on P_n
/// and cached. Deterministic to the last bit for a fixed order.
inline const GlRule& gl_rule(int order) {
    static std::map<int, std::unique_ptr<GlRule>> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(order);
    if (it != cache.end()) return *it->second;

    auto rule = std::make_unique<GlRule>();
    rule->nodes.resize(order);
    rule->weights.resize(order);
    const double pi = 3.14159265358979323846;
    for (int i = 0; i < (order + 1) / 2; ++i) {
        double x = std::cos(pi * (i + 0.75) / (order + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= order; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = order * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        rule->nodes[i] = -x;
        rule->nodes[order - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule->weights[i] = w;
        rule->weights[order - 1 - i] = w;
    }
    auto [pos, inserted] = cache.emplace(order, std::move(rule));
    (void)inserted;
    return *pos->second;
}

template <typename F>
double integrate_gl(F&& f, double a, double b, int order) {
    const GlRule& rule = gl_rule(order);
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double sum = 0.0;
    for (int i = 0; i < order; ++i) sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
    return half * sum;
}

/// integral_0^L w^s g(w) dw for s in (-1, 0), g smooth on (0, L].
/// Dyadic subdivision toward the singular endpoint; the innermost sliver is
/// handled analytically with g(0), so the algebraic singularity costs nothing
/// in accuracy.
template <typename G>
double dyadic_power_integral(G&& g, double length, double s, double g_at_zero, int order,
                             int levels = 48) {
    if (!(length > 0.0)) return 0.0;
    double total = 0.0;
    double hi = length;
    for (int level = 0; level < levels; ++level) {
        const double lo = 0.5 * hi;
        total += integrate_gl([&](double w) { return std::pow(w, s) * g(w); }, lo, hi, order);
        hi = lo;
    }
    total += g_at_zero * std::pow(hi, s + 1.0) / (s + 1.0);
    return total;
}

}  // namespace fraceuler::detail
