#pragma once

#include <vector>

#include "fraceuler/zeta.hpp"

namespace fraceuler {

/// Approximant Z^{i1,i2}_n of the generalized Rosenblatt process at the coarse
/// nodes: Z[l] = n * sum_{k<l} zeta^{i1,i2}_{k,n}. The diagonal case reduces to
/// the exact scaled Hermite form of the coarse increments; the off-diagonal
/// case uses fine-subgrid sums. Requires H > 3/4.
inline std::vector<double> sample_rosenblatt_approx(const FbmPath& driver, int i1, int i2,
                                                    std::int64_t sub_factor) {
    if (!(driver.hurst().value() > 0.75))
        throw std::domain_error("sample_rosenblatt_approx: requires H > 3/4");
    const std::int64_t n = detail::coarse_steps(driver, sub_factor, "sample_rosenblatt_approx");
    const std::vector<double> blocks = zeta_blocks(driver, i1, i2, sub_factor);
    std::vector<double> z(static_cast<std::size_t>(n + 1), 0.0);
    double acc = 0.0;
    for (std::int64_t k = 0; k < n; ++k) {
        acc += blocks[static_cast<std::size_t>(k)];
        z[static_cast<std::size_t>(k + 1)] = static_cast<double>(n) * acc;
    }
    return z;
}

}  // namespace fraceuler
