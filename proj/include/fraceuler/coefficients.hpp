#pragma once

#include <functional>
#include <map>
#include <string>

#include "fraceuler/rng.hpp"
#include "fraceuler/smallmat.hpp"

namespace fraceuler {

/// Coefficient fields of the SDE dX = b(X)dt + sum_j sigma^j(X) dB^j.
/// Gradient conventions: (grad_b)_{ik} = db^i/dx_k, (grad_sigma j)_{ik} = d sigma^{j,i}/dx_k,
/// and grad_sigma_sigma(x, j) = grad_sigma(x, j) * sigma-column-j.
struct CoefficientSystem {
    int d = 0;
    int m = 0;
    std::function<Vec(const Vec&)> drift;
    std::function<Mat(const Vec&)> diffusion;  // d x m, column j is sigma^j
    std::function<Mat(const Vec&)> drift_grad;
    std::function<Mat(const Vec&, int)> diffusion_grad;
    std::function<Vec(const Vec&, int)> grad_sigma_sigma;
    int smoothness = 0;  // declared C^k_b class of the coefficients
    std::string name;
    Vec default_x0;
};

/// Cross-checks user-supplied derivative fields on random probe points.
/// Throws std::invalid_argument naming the first violated consistency bound.
inline void validate_consistency(const CoefficientSystem& sys, std::uint64_t seed = 1234,
                                 int probes = 24, double radius = 2.0) {
    GaussianRng rng(seed);
    const double fd_step = 1e-5;
    for (int probe = 0; probe < probes; ++probe) {
        Vec x(sys.d);
        for (auto& xi : x) xi = radius * (2.0 * rng.uniform01() - 1.0);

        for (int j = 0; j < sys.m; ++j) {
            const Mat gs = sys.diffusion_grad(x, j);
            const Vec sj = sys.diffusion(x).col(j);
            const Vec gss = sys.grad_sigma_sigma(x, j);
            Vec prod = gs * sj;
            for (int i = 0; i < sys.d; ++i)
                if (std::abs(prod[i] - gss[i]) > 1e-10)
                    throw std::invalid_argument(
                        "CoefficientSystem '" + sys.name +
                        "': grad_sigma_sigma inconsistent with grad_sigma * sigma (component " +
                        std::to_string(i) + ", driver " + std::to_string(j) + ")");
        }

        // Central-difference checks of the supplied gradients.
        const Mat gb = sys.drift_grad(x);
        for (int k = 0; k < sys.d; ++k) {
            Vec xp = x, xm = x;
            xp[k] += fd_step;
            xm[k] -= fd_step;
            const Vec bp = sys.drift(xp), bm = sys.drift(xm);
            for (int i = 0; i < sys.d; ++i) {
                const double fd = (bp[i] - bm[i]) / (2.0 * fd_step);
                if (std::abs(fd - gb(i, k)) > 1e-5)
                    throw std::invalid_argument("CoefficientSystem '" + sys.name +
                                                "': grad_b disagrees with finite differences");
            }
            const Mat sp = sys.diffusion(xp), sm = sys.diffusion(xm);
            for (int j = 0; j < sys.m; ++j) {
                const Mat gsj = sys.diffusion_grad(x, j);
                for (int i = 0; i < sys.d; ++i) {
                    const double fd = (sp(i, j) - sm(i, j)) / (2.0 * fd_step);
                    if (std::abs(fd - gsj(i, k)) > 1e-5)
                        throw std::invalid_argument(
                            "CoefficientSystem '" + sys.name +
                            "': grad_sigma disagrees with finite differences");
                }
            }
        }
    }
}

namespace systems {

/// d = m = 1, b = 0, sigma(x) = x. Solution x0 * exp(B_t) under pathwise calculus.
inline CoefficientSystem geometric() {
    CoefficientSystem s;
    s.d = 1;
    s.m = 1;
    s.name = "geometric";
    s.smoothness = 5;
    s.default_x0 = {1.0};
    s.drift = [](const Vec&) { return Vec{0.0}; };
    s.diffusion = [](const Vec& x) {
        Mat sig(1, 1);
        sig(0, 0) = x[0];
        return sig;
    };
    s.drift_grad = [](const Vec&) { return Mat(1, 1); };
    s.diffusion_grad = [](const Vec&, int) {
        Mat g(1, 1);
        g(0, 0) = 1.0;
        return g;
    };
    s.grad_sigma_sigma = [](const Vec& x, int) { return Vec{x[0]}; };
    return s;
}

/// d = m = 2 with linear drift and two linear diffusion fields.
inline CoefficientSystem linear_2d() {
    CoefficientSystem s;
    s.d = 2;
    s.m = 2;
    s.name = "linear_2d";
    s.smoothness = 5;
    s.default_x0 = {1.0, 0.5};
    static const double A[2][2] = {{-0.3, 0.15}, {-0.15, -0.3}};
    static const double S[2][2][2] = {{{0.4, 0.0}, {0.1, 0.3}}, {{0.0, 0.2}, {0.2, 0.0}}};
    s.drift = [](const Vec& x) {
        return Vec{A[0][0] * x[0] + A[0][1] * x[1], A[1][0] * x[0] + A[1][1] * x[1]};
    };
    s.drift_grad = [](const Vec&) {
        Mat g(2, 2);
        for (int i = 0; i < 2; ++i)
            for (int k = 0; k < 2; ++k) g(i, k) = A[i][k];
        return g;
    };
    s.diffusion = [](const Vec& x) {
        Mat sig(2, 2);
        for (int j = 0; j < 2; ++j)
            for (int i = 0; i < 2; ++i) sig(i, j) = S[j][i][0] * x[0] + S[j][i][1] * x[1];
        return sig;
    };
    s.diffusion_grad = [](const Vec&, int j) {
        Mat g(2, 2);
        for (int i = 0; i < 2; ++i)
            for (int k = 0; k < 2; ++k) g(i, k) = S[j][i][k];
        return g;
    };
    s.grad_sigma_sigma = [](const Vec& x, int j) {
        Vec sj{S[j][0][0] * x[0] + S[j][0][1] * x[1], S[j][1][0] * x[0] + S[j][1][1] * x[1]};
        return Vec{S[j][0][0] * sj[0] + S[j][0][1] * sj[1],
                   S[j][1][0] * sj[0] + S[j][1][1] * sj[1]};
    };
    return s;
}

/// Pure drift, nonlinear Lipschitz b; baseline for the classical Euler rate.
inline CoefficientSystem drift_only() {
    CoefficientSystem s;
    s.d = 1;
    s.m = 1;
    s.name = "drift_only";
    s.smoothness = 5;
    s.default_x0 = {0.3};
    s.drift = [](const Vec& x) { return Vec{std::cos(x[0])}; };
    s.drift_grad = [](const Vec& x) {
        Mat g(1, 1);
        g(0, 0) = -std::sin(x[0]);
        return g;
    };
    s.diffusion = [](const Vec&) { return Mat(1, 1); };
    s.diffusion_grad = [](const Vec&, int) { return Mat(1, 1); };
    s.grad_sigma_sigma = [](const Vec&, int) { return Vec{0.0}; };
    return s;
}

/// Levy-area example: b = 0, sigma^1 = (1,0), sigma^2 = (0, x_1); all
/// grad_sigma_sigma vanish, so naive and modified schemes coincide.
inline CoefficientSystem levy_area() {
    CoefficientSystem s;
    s.d = 2;
    s.m = 2;
    s.name = "levy_area";
    s.smoothness = 5;
    s.default_x0 = {0.0, 0.0};
    s.drift = [](const Vec&) { return Vec{0.0, 0.0}; };
    s.drift_grad = [](const Vec&) { return Mat(2, 2); };
    s.diffusion = [](const Vec& x) {
        Mat sig(2, 2);
        sig(0, 0) = 1.0;
        sig(1, 1) = x[0];
        return sig;
    };
    s.diffusion_grad = [](const Vec&, int j) {
        Mat g(2, 2);
        if (j == 1) g(1, 0) = 1.0;
        return g;
    };
    s.grad_sigma_sigma = [](const Vec&, int) { return Vec{0.0, 0.0}; };
    return s;
}

}  // namespace systems

/// Lookup of built-in and user-registered coefficient systems by name.
inline std::map<std::string, std::function<CoefficientSystem()>>& coefficient_registry() {
    static std::map<std::string, std::function<CoefficientSystem()>> registry = {
        {"geometric", systems::geometric},
        {"linear_2d", systems::linear_2d},
        {"drift_only", systems::drift_only},
        {"levy_area", systems::levy_area},
    };
    return registry;
}

inline CoefficientSystem coefficient_system(const std::string& name) {
    const auto& reg = coefficient_registry();
    auto it = reg.find(name);
    if (it == reg.end())
        throw std::invalid_argument("coefficient_system: unknown system '" + name + "'");
    return it->second();
}

}  // namespace fraceuler
