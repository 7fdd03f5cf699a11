#pragma once

#include <cmath>
#include <vector>

#include "fraceuler/matrix_bm.hpp"
#include "fraceuler/variational.hpp"

namespace fraceuler {

/// Limit functional of the naive-scheme error at node t_index:
/// (T^{2H-1}/2) Lambda_t sum_j int_0^t Gamma_s (grad sigma^j sigma^j)(X_s) ds,
/// the time integral evaluated with the trapezoid rule on the grid.
inline Vec naive_limit_functional(const CoefficientSystem& sys, const SolutionPath& x_path,
                                  const VariationalPair& vp, const HurstParam& h,
                                  std::int64_t t_index) {
    const double t_horizon = x_path.grid().t_horizon();
    const double dt = x_path.grid().step();
    Vec integral(sys.d, 0.0);
    for (std::int64_t k = 0; k <= t_index; ++k) {
        const double weight = (k == 0 || k == t_index) ? 0.5 * dt : dt;
        const Vec x = x_path.state(k);
        Vec contrib(sys.d, 0.0);
        for (int j = 0; j < sys.m; ++j) axpy(1.0, sys.grad_sigma_sigma(x, j), contrib);
        axpy(weight, vp.gamma[static_cast<std::size_t>(k)] * contrib, integral);
    }
    const double factor = 0.5 * std::pow(t_horizon, h.two_h() - 1.0);
    Vec out = vp.lambda[static_cast<std::size_t>(t_index)] * integral;
    for (auto& v : out) v *= factor;
    return out;
}

/// Solution path of the CLT limit equation:
/// U_{t_l} = Lambda_l sum_{i,j} sum_{k<l} Gamma_k (grad sigma^j sigma^i)(X_k) dW^{ij}_k.
inline std::vector<Vec> clt_limit_solution(const CoefficientSystem& sys,
                                           const SolutionPath& x_path,
                                           const VariationalPair& vp,
                                           const MatrixBmPath& w_path) {
    if (!(w_path.grid() == x_path.grid()))
        throw std::invalid_argument("clt_limit_solution: grids differ");
    if (w_path.m() != sys.m)
        throw std::invalid_argument("clt_limit_solution: W dimension mismatch");
    const std::int64_t n = x_path.grid().n();
    std::vector<Vec> u(static_cast<std::size_t>(n + 1), Vec(sys.d, 0.0));
    Vec acc(sys.d, 0.0);  // sum_k Gamma_k (...) dW_k
    for (std::int64_t l = 1; l <= n; ++l) {
        const std::int64_t k = l - 1;
        const Vec x = x_path.state(k);
        const Mat sig = sys.diffusion(x);
        Vec step(sys.d, 0.0);
        for (int j = 0; j < sys.m; ++j) {
            const Mat gs = sys.diffusion_grad(x, j);
            for (int i = 0; i < sys.m; ++i) {
                const double dw = w_path.increment(k, i, j);
                if (dw == 0.0) continue;
                // (grad sigma^j sigma^i)(x) dW^{ij}
                for (int row = 0; row < sys.d; ++row) {
                    double v = 0.0;
                    for (int col = 0; col < sys.d; ++col) v += gs(row, col) * sig(col, i);
                    step[row] += v * dw;
                }
            }
        }
        axpy(1.0, vp.gamma[static_cast<std::size_t>(k)] * step, acc);
        u[static_cast<std::size_t>(l)] = vp.lambda[static_cast<std::size_t>(l)] * acc;
    }
    return u;
}

/// Solution path of the H > 3/4 limit equation with its four terms:
/// the dZ integral plus the three (T/2)-weighted drift interaction terms.
/// z_paths[i][j] are Rosenblatt approximants on the same grid.
inline std::vector<Vec> rosenblatt_limit_solution(
    const CoefficientSystem& sys, const SolutionPath& x_path, const VariationalPair& vp,
    const std::vector<std::vector<std::vector<double>>>& z_paths, const FbmPath& b_path) {
    if (!(b_path.grid() == x_path.grid()))
        throw std::invalid_argument("rosenblatt_limit_solution: grids differ");
    if (!(b_path.hurst().value() > 0.75))
        throw std::domain_error("rosenblatt_limit_solution: requires H > 3/4");
    const std::int64_t n = x_path.grid().n();
    const double dt = x_path.grid().step();
    const double half_t = 0.5 * x_path.grid().t_horizon();

    std::vector<Vec> u(static_cast<std::size_t>(n + 1), Vec(sys.d, 0.0));
    Vec acc(sys.d, 0.0);
    for (std::int64_t l = 1; l <= n; ++l) {
        const std::int64_t k = l - 1;
        const Vec x = x_path.state(k);
        const Mat sig = sys.diffusion(x);
        const Vec b = sys.drift(x);
        const Mat gb = sys.drift_grad(x);
        Vec step(sys.d, 0.0);

        for (int j = 0; j < sys.m; ++j) {
            const Mat gs = sys.diffusion_grad(x, j);
            for (int i = 0; i < sys.m; ++i) {
                const auto& z = z_paths[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
                const double dz = z[static_cast<std::size_t>(l)] - z[static_cast<std::size_t>(k)];
                if (dz == 0.0) continue;
                for (int row = 0; row < sys.d; ++row) {
                    double v = 0.0;
                    for (int col = 0; col < sys.d; ++col) v += gs(row, col) * sig(col, i);
                    step[row] += v * dz;
                }
            }
        }

        // (T/2) [ (grad b b) dt + (grad b sigma^j) dB^j + (grad sigma^j b) dB^j ]
        axpy(half_t * dt, gb * b, step);
        for (int j = 0; j < sys.m; ++j) {
            const double db = b_path.increment(j, k);
            axpy(half_t * db, gb * sig.col(j), step);
            axpy(half_t * db, sys.diffusion_grad(x, j) * b, step);
        }

        axpy(1.0, vp.gamma[static_cast<std::size_t>(k)] * step, acc);
        u[static_cast<std::size_t>(l)] = vp.lambda[static_cast<std::size_t>(l)] * acc;
    }
    return u;
}

}  // namespace fraceuler
