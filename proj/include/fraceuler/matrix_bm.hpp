#pragma once

#include <cmath>
#include <vector>

#include "fraceuler/core.hpp"
#include "fraceuler/limit_constants.hpp"
#include "fraceuler/rng.hpp"

namespace fraceuler {

/// Specification of the matrix-valued Brownian motion W with covariance
/// E[W^{ij}_t W^{i'j'}_s] = alpha_H^2 (t ^ s) / T * (R d_{ji'} d_{ij'} + Q d_{jj'} d_{ii'}).
struct MatrixBmSpec {
    int m = 1;
    LimitConstants constants;

    double cov(int i, int j, int ip, int jp, double t, double s) const {
        const double a2 = constants.h.alpha() * constants.h.alpha();
        const double tmin = std::min(t, s);
        const double kron = (j == ip && i == jp ? constants.big_r : 0.0) +
                            (j == jp && i == ip ? constants.big_q : 0.0);
        return a2 * tmin / constants.t_horizon * kron;
    }
};

/// Path of m x m matrices W_{t_l} at the grid nodes, row-major per node.
class MatrixBmPath {
  public:
    MatrixBmPath(UniformGrid grid, int m)
        : grid_(grid), m_(m),
          data_(static_cast<std::size_t>(grid.n() + 1) * m * m, 0.0) {}

    const UniformGrid& grid() const { return grid_; }
    int m() const { return m_; }
    double value(std::int64_t node, int i, int j) const {
        return data_[(static_cast<std::size_t>(node) * m_ + i) * m_ + j];
    }
    double& value(std::int64_t node, int i, int j) {
        return data_[(static_cast<std::size_t>(node) * m_ + i) * m_ + j];
    }
    double increment(std::int64_t k, int i, int j) const {
        return value(k + 1, i, j) - value(k, i, j);
    }

  private:
    UniformGrid grid_;
    int m_;
    std::vector<double> data_;
};

/// Samples W from independent standard Brownian motions per the construction
/// W^{ii} = (a_H/sqrt(T)) sqrt(Q+R) Wt1^{ii},
/// W^{ij} = (a_H/sqrt(T)) (sqrt(Q-R) Wt1^{ij} + sqrt(R) Wt0^{ij}), Wt0 symmetric.
inline MatrixBmPath sample_matrix_bm(const MatrixBmSpec& spec, const UniformGrid& grid,
                                     std::uint64_t seed) {
    const double q = spec.constants.big_q;
    const double r = spec.constants.big_r;
    if (q - r < -1e-9 * std::max(1.0, std::abs(q)))
        throw std::runtime_error("sample_matrix_bm: negative radicand Q - R = " +
                                 std::to_string(q - r) + "; constants are inconsistent");
    const double root_t = std::sqrt(spec.constants.t_horizon);
    const double a = spec.constants.h.alpha() / root_t;
    const double c_diag = a * std::sqrt(std::max(q + r, 0.0));
    const double c_off1 = a * std::sqrt(std::max(q - r, 0.0));
    const double c_off0 = a * std::sqrt(std::max(r, 0.0));

    const int m = spec.m;
    const double sdt = std::sqrt(grid.step());
    MatrixBmPath path(grid, m);
    GaussianRng rng(derive_seed(seed, 0xB30BULL));
    std::vector<double> z1(static_cast<std::size_t>(m) * m);
    std::vector<double> z0(static_cast<std::size_t>(m) * m);
    for (std::int64_t k = 0; k < grid.n(); ++k) {
        for (auto& z : z1) z = rng.normal();
        for (int i = 0; i < m; ++i)
            for (int j = i; j < m; ++j) {
                const double z = rng.normal();
                z0[static_cast<std::size_t>(i) * m + j] = z;
                z0[static_cast<std::size_t>(j) * m + i] = z;
            }
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                const double w1 = z1[static_cast<std::size_t>(i) * m + j];
                const double dw =
                    (i == j) ? c_diag * w1
                             : c_off1 * w1 + c_off0 * z0[static_cast<std::size_t>(i) * m + j];
                path.value(k + 1, i, j) = path.value(k, i, j) + sdt * dw;
            }
    }
    return path;
}

}  // namespace fraceuler
