#pragma once

#include <cmath>
#include <vector>

#include "fraceuler/coefficients.hpp"
#include "fraceuler/core.hpp"
#include "fraceuler/fbm.hpp"

namespace fraceuler {

enum class SchemeKind { Naive, Modified, ExactOracle, FineReference };

inline const char* to_string(SchemeKind k) {
    switch (k) {
        case SchemeKind::Naive: return "naive";
        case SchemeKind::Modified: return "modified";
        case SchemeKind::ExactOracle: return "exact_oracle";
        case SchemeKind::FineReference: return "fine_reference";
    }
    return "?";
}

/// Discrete solution X^n at the grid nodes, row-major (n+1) x d.
class SolutionPath {
  public:
    SolutionPath(UniformGrid grid, int d, SchemeKind kind)
        : grid_(grid), d_(d), kind_(kind),
          states_(static_cast<std::size_t>(grid.n() + 1) * d, 0.0) {}

    const UniformGrid& grid() const { return grid_; }
    int d() const { return d_; }
    SchemeKind kind() const { return kind_; }

    double value(std::int64_t i, int comp) const {
        return states_[static_cast<std::size_t>(i) * d_ + comp];
    }
    double& value(std::int64_t i, int comp) {
        return states_[static_cast<std::size_t>(i) * d_ + comp];
    }
    Vec state(std::int64_t i) const {
        return Vec(states_.begin() + static_cast<std::ptrdiff_t>(i) * d_,
                   states_.begin() + static_cast<std::ptrdiff_t>(i + 1) * d_);
    }
    void set_state(std::int64_t i, const Vec& x) {
        for (int c = 0; c < d_; ++c) states_[static_cast<std::size_t>(i) * d_ + c] = x[c];
    }

  private:
    UniformGrid grid_;
    int d_;
    SchemeKind kind_;
    std::vector<double> states_;
};

namespace detail {

inline void check_scheme_inputs(const CoefficientSystem& sys, const FbmPath& driver,
                                const Vec& x0) {
    if (driver.m() != sys.m)
        throw std::invalid_argument("scheme: driver dimension m = " + std::to_string(driver.m()) +
                                    " does not match system m = " + std::to_string(sys.m));
    if (static_cast<int>(x0.size()) != sys.d)
        throw std::invalid_argument("scheme: x0 dimension does not match system d");
}

template <bool WithCorrection>
SolutionPath euler_run(const CoefficientSystem& sys, const FbmPath& driver, const Vec& x0) {
    check_scheme_inputs(sys, driver, x0);
    const UniformGrid& grid = driver.grid();
    const std::int64_t n = grid.n();
    const double dt = grid.step();
    const double corr = WithCorrection ? 0.5 * std::pow(dt, driver.hurst().two_h()) : 0.0;
    SolutionPath out(grid, sys.d, WithCorrection ? SchemeKind::Modified : SchemeKind::Naive);
    Vec x = x0;
    out.set_state(0, x);
    for (std::int64_t k = 0; k < n; ++k) {
        Vec next = x;
        axpy(dt, sys.drift(x), next);
        const Mat sig = sys.diffusion(x);
        for (int j = 0; j < sys.m; ++j) {
            const double db = driver.increment(j, k);
            for (int i = 0; i < sys.d; ++i) next[i] += sig(i, j) * db;
        }
        if constexpr (WithCorrection) {
            for (int j = 0; j < sys.m; ++j) axpy(corr, sys.grad_sigma_sigma(x, j), next);
        }
        x = std::move(next);
        out.set_state(k + 1, x);
    }
    return out;
}

}  // namespace detail

/// Left-point (naive) Euler scheme.
inline SolutionPath naive_euler(const CoefficientSystem& sys, const FbmPath& driver,
                                const Vec& x0) {
    return detail::euler_run<false>(sys, driver, x0);
}

/// Naive scheme plus the per-step correction (1/2) (T/n)^{2H} sum_j (grad sigma^j sigma^j).
inline SolutionPath modified_euler(const CoefficientSystem& sys, const FbmPath& driver,
                                   const Vec& x0) {
    return detail::euler_run<true>(sys, driver, x0);
}

/// Closed-form solution x0 * exp(B_t) of the scalar system b = 0, sigma(x) = x.
inline SolutionPath exact_geometric(const FbmPath& driver, double x0) {
    if (driver.m() != 1) throw std::invalid_argument("exact_geometric: driver must have m = 1");
    SolutionPath out(driver.grid(), 1, SchemeKind::ExactOracle);
    for (std::int64_t i = 0; i <= driver.grid().n(); ++i)
        out.value(i, 0) = x0 * std::exp(driver.value(0, i));
    return out;
}

/// Proxy for the true solution: modified scheme on the fine grid, subsampled to
/// the coarse one. The driver passed in is the fine driver.
inline SolutionPath reference_solution(const CoefficientSystem& sys, const FbmPath& fine_driver,
                                       const Vec& x0, std::int64_t coarse_n) {
    const std::int64_t nf = fine_driver.grid().n();
    if (coarse_n < 1 || nf % coarse_n != 0)
        throw std::invalid_argument("reference_solution: coarse_n must divide the fine n");
    const std::int64_t factor = nf / coarse_n;
    const SolutionPath fine = modified_euler(sys, fine_driver, x0);
    SolutionPath out(UniformGrid(coarse_n, fine_driver.grid().t_horizon()), sys.d,
                     SchemeKind::FineReference);
    for (std::int64_t i = 0; i <= coarse_n; ++i)
        for (int c = 0; c < sys.d; ++c) out.value(i, c) = fine.value(i * factor, c);
    return out;
}

}  // namespace fraceuler
