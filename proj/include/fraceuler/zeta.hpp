#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "fraceuler/core.hpp"
#include "fraceuler/fbm.hpp"

namespace fraceuler {

// The weighted-variation building block is
//   zeta^{i,j}_{k,n} = int_{t_k}^{t_{k+1}} (B^i_s - B^i_{t_k}) dB^j_s  (Skorohod),
// evaluated on a driver sampled at resolution n * sub_factor. On the diagonal
// the block is exactly ((dB)^2 - (T/n)^{2H}) / 2, the scaled second Hermite
// polynomial of the increment. Off the diagonal the components are
// independent, the Skorohod and pathwise integrals coincide, and a trapezoid
// sum over the fine subgrid is used: one-sided sums leave an O(1/sub_factor)
// bias in variance functionals of the blocks (the block integral is
// correlated with its own within-block refinement), which the centered
// evaluation reduces to O(1/sub_factor^2).

namespace detail {

inline std::int64_t coarse_steps(const FbmPath& driver, std::int64_t sub_factor,
                                 const char* who) {
    if (sub_factor < 1) throw std::invalid_argument(std::string(who) + ": sub_factor must be >= 1");
    if (driver.grid().n() % sub_factor != 0)
        throw std::invalid_argument(std::string(who) +
                                    ": sub_factor does not divide the driver resolution");
    return driver.grid().n() / sub_factor;
}

}  // namespace detail

/// All n diagonal blocks zeta^{i,i}_{k,n} for k = 0..n-1.
inline std::vector<double> zeta_blocks_diagonal(const FbmPath& driver, int i,
                                                std::int64_t sub_factor) {
    const std::int64_t n = detail::coarse_steps(driver, sub_factor, "zeta_blocks_diagonal");
    const double dt_pow = std::pow(driver.grid().t_horizon() / static_cast<double>(n),
                                   driver.hurst().two_h());
    std::vector<double> out(static_cast<std::size_t>(n));
    for (std::int64_t k = 0; k < n; ++k) {
        const double db =
            driver.value(i, (k + 1) * sub_factor) - driver.value(i, k * sub_factor);
        out[static_cast<std::size_t>(k)] = 0.5 * (db * db - dt_pow);
    }
    return out;
}

/// All n off-diagonal blocks zeta^{i,j}_{k,n}, i != j, by trapezoid sums on
/// the fine subgrid.
inline std::vector<double> zeta_blocks_cross(const FbmPath& driver, int i, int j,
                                             std::int64_t sub_factor) {
    const std::int64_t n = detail::coarse_steps(driver, sub_factor, "zeta_blocks_cross");
    if (sub_factor < 2)
        throw std::invalid_argument(
            "zeta_blocks_cross: off-diagonal blocks need a fine subgrid (sub_factor >= 2)");
    std::vector<double> out(static_cast<std::size_t>(n));
    for (std::int64_t k = 0; k < n; ++k) {
        const std::int64_t base = k * sub_factor;
        const double bi0 = driver.value(i, base);
        double acc = 0.0;
        for (std::int64_t u = 0; u < sub_factor; ++u) {
            const double wi =
                0.5 * (driver.value(i, base + u) + driver.value(i, base + u + 1)) - bi0;
            acc += wi * (driver.value(j, base + u + 1) - driver.value(j, base + u));
        }
        out[static_cast<std::size_t>(k)] = acc;
    }
    return out;
}

inline std::vector<double> zeta_blocks(const FbmPath& driver, int i, int j,
                                       std::int64_t sub_factor) {
    return i == j ? zeta_blocks_diagonal(driver, i, sub_factor)
                  : zeta_blocks_cross(driver, i, j, sub_factor);
}

/// Single block accessor.
inline double zeta_block(const FbmPath& driver, int i, int j, std::int64_t k,
                         std::int64_t sub_factor) {
    const std::int64_t n = detail::coarse_steps(driver, sub_factor, "zeta_block");
    if (k < 0 || k >= n) throw std::invalid_argument("zeta_block: block index out of range");
    if (i == j) {
        const double dt_pow = std::pow(driver.grid().t_horizon() / static_cast<double>(n),
                                       driver.hurst().two_h());
        const double db =
            driver.value(i, (k + 1) * sub_factor) - driver.value(i, k * sub_factor);
        return 0.5 * (db * db - dt_pow);
    }
    if (sub_factor < 2)
        throw std::invalid_argument(
            "zeta_block: off-diagonal blocks need a fine subgrid (sub_factor >= 2)");
    const std::int64_t base = k * sub_factor;
    const double bi0 = driver.value(i, base);
    double acc = 0.0;
    for (std::int64_t u = 0; u < sub_factor; ++u)
        acc += (0.5 * (driver.value(i, base + u) + driver.value(i, base + u + 1)) - bi0) *
               (driver.value(j, base + u + 1) - driver.value(j, base + u));
    return acc;
}

/// Matrix-valued partial-sum process Xi^{n,i,j}_{t_l} = gamma_n sum_{k<l} zeta^{i,j}_{k,n}.
class WeightedStatPath {
  public:
    WeightedStatPath(UniformGrid grid, int m, double normalization)
        : grid_(grid), m_(m), normalization_(normalization),
          data_(static_cast<std::size_t>(grid.n() + 1) * m * m, 0.0) {}

    const UniformGrid& grid() const { return grid_; }
    int m() const { return m_; }
    double normalization() const { return normalization_; }
    double value(std::int64_t node, int i, int j) const {
        return data_[(static_cast<std::size_t>(node) * m_ + i) * m_ + j];
    }
    double& value(std::int64_t node, int i, int j) {
        return data_[(static_cast<std::size_t>(node) * m_ + i) * m_ + j];
    }

  private:
    UniformGrid grid_;
    int m_;
    double normalization_;
    std::vector<double> data_;
};

inline WeightedStatPath xi_process(const FbmPath& driver, std::int64_t sub_factor) {
    const std::int64_t n = detail::coarse_steps(driver, sub_factor, "xi_process");
    const UniformGrid coarse(n, driver.grid().t_horizon());
    const double gn = gamma_n(n, driver.hurst());
    WeightedStatPath xi(coarse, driver.m(), gn);
    for (int i = 0; i < driver.m(); ++i)
        for (int j = 0; j < driver.m(); ++j) {
            const std::vector<double> blocks = zeta_blocks(driver, i, j, sub_factor);
            double acc = 0.0;
            for (std::int64_t l = 0; l < n; ++l) {
                acc += blocks[static_cast<std::size_t>(l)];
                xi.value(l + 1, i, j) = gn * acc;
            }
        }
    return xi;
}

/// Theta blocks over breakpoints 0 <= k_1 < ... < k_{L+1} <= n-1 (coarse block
/// indices): Theta_l(i,j) = gamma_n sum_{k=k_l}^{k_{l+1}} zeta^{i,j}_{k,n},
/// endpoints included on both sides.
inline std::vector<std::vector<double>> theta_blocks(const FbmPath& driver,
                                                     std::int64_t sub_factor,
                                                     const std::vector<std::int64_t>& breaks) {
    const std::int64_t n = detail::coarse_steps(driver, sub_factor, "theta_blocks");
    if (breaks.size() < 2) throw std::invalid_argument("theta_blocks: need >= 2 breakpoints");
    for (std::size_t l = 0; l + 1 < breaks.size(); ++l)
        if (breaks[l] < 0 || breaks[l] >= breaks[l + 1] || breaks[l + 1] > n - 1)
            throw std::invalid_argument("theta_blocks: breakpoints must be increasing in [0, n-1]");
    const double gn = gamma_n(n, driver.hurst());
    const int m = driver.m();
    const std::size_t blocks_count = breaks.size() - 1;
    std::vector<std::vector<double>> theta(blocks_count,
                                           std::vector<double>(static_cast<std::size_t>(m) * m));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            const std::vector<double> z = zeta_blocks(driver, i, j, sub_factor);
            for (std::size_t l = 0; l < blocks_count; ++l) {
                double acc = 0.0;
                for (std::int64_t k = breaks[l]; k <= breaks[l + 1]; ++k)
                    acc += z[static_cast<std::size_t>(k)];
                theta[l][static_cast<std::size_t>(i) * m + j] = gn * acc;
            }
        }
    return theta;
}

enum class WeightMode { TimeWeight, IncrementWeight };

/// Per-block weighted integrals for the scalar weighted-sum limits:
/// TimeWeight:       zeta_{k,n}  = int (s - eta(s)) dB_s,
/// IncrementWeight:  zetat_{k,n} = int (B_s - B_{eta(s)}) ds.
/// The time weight is evaluated at fine-step midpoints and the increment
/// weight by the trapezoid rule; the midpoint/trapezoid pairing keeps
/// zetat_{k,n} + zeta_{k,n} = (T/n) dB_k exact at the discrete level while
/// avoiding the O(1/sub_factor) variance bias of one-sided sums.
inline std::vector<double> weighted_blocks(const FbmPath& driver, std::int64_t sub_factor,
                                           WeightMode mode) {
    const std::int64_t n = detail::coarse_steps(driver, sub_factor, "weighted_blocks");
    if (driver.m() != 1)
        throw std::invalid_argument("weighted_blocks: driver must be one-dimensional");
    if (sub_factor < 2)
        throw std::invalid_argument("weighted_blocks: block integrals need a fine subgrid");
    const double fine_dt = driver.grid().step();
    std::vector<double> out(static_cast<std::size_t>(n));
    for (std::int64_t k = 0; k < n; ++k) {
        const std::int64_t base = k * sub_factor;
        double acc = 0.0;
        if (mode == WeightMode::TimeWeight) {
            for (std::int64_t u = 0; u < sub_factor; ++u)
                acc += fine_dt * (static_cast<double>(u) + 0.5) *
                       (driver.value(0, base + u + 1) - driver.value(0, base + u));
        } else {
            const double b0 = driver.value(0, base);
            for (std::int64_t u = 0; u < sub_factor; ++u)
                acc += (0.5 * (driver.value(0, base + u) + driver.value(0, base + u + 1)) - b0) *
                       fine_dt;
        }
        out[static_cast<std::size_t>(k)] = acc;
    }
    return out;
}

/// n * sum_{k<n} f(t_k) zeta_{k,n} evaluated at t = T.
inline double weighted_sum_check(const FbmPath& driver, const std::vector<double>& f_at_nodes,
                                 WeightMode mode, std::int64_t sub_factor) {
    const std::int64_t n = detail::coarse_steps(driver, sub_factor, "weighted_sum_check");
    if (f_at_nodes.size() != static_cast<std::size_t>(n + 1))
        throw std::invalid_argument("weighted_sum_check: f must be given at the n+1 coarse nodes");
    const std::vector<double> blocks = weighted_blocks(driver, sub_factor, mode);
    double acc = 0.0;
    for (std::int64_t k = 0; k < n; ++k)
        acc += f_at_nodes[static_cast<std::size_t>(k)] * blocks[static_cast<std::size_t>(k)];
    return static_cast<double>(n) * acc;
}

}  // namespace fraceuler
