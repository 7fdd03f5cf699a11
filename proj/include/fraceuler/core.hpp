#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace fraceuler {

// Raised when a numeric target cannot be met at the requested tolerance
// (quadrature refinement, series truncation, experiment tolerance checks).
// The CLI maps this to a dedicated exit code, distinct from execution errors.
struct ToleranceError : std::runtime_error {
    explicit ToleranceError(const std::string& what) : std::runtime_error(what) {}
};

struct QuadratureError : ToleranceError {
    explicit QuadratureError(const std::string& what) : ToleranceError(what) {}
};

struct FactorizationError : std::runtime_error {
    explicit FactorizationError(const std::string& what) : std::runtime_error(what) {}
};

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Hurst parameter restricted to the long-memory regime (1/2, 1).
class HurstParam {
  public:
    explicit HurstParam(double h) : h_(h) {
        if (!(h > 0.5) || !(h < 1.0))
            throw std::invalid_argument("HurstParam: h must lie strictly in (0.5, 1), got " +
                                        std::to_string(h));
    }

    double value() const { return h_; }
    double two_h() const { return 2.0 * h_; }
    /// alpha_H = H(2H-1), the constant in the kernel representation of the covariance.
    double alpha() const { return h_ * (2.0 * h_ - 1.0); }

    bool is_three_quarters(double eps = 1e-12) const { return std::abs(h_ - 0.75) < eps; }

  private:
    double h_;
};

/// Uniform partition of [0, T] with n steps, nodes t_i = iT/n.
class UniformGrid {
  public:
    UniformGrid(std::int64_t n, double t_horizon) : n_(n), t_(t_horizon) {
        if (n < 1) throw std::invalid_argument("UniformGrid: n must be >= 1");
        if (!(t_horizon > 0.0)) throw std::invalid_argument("UniformGrid: T must be > 0");
    }

    std::int64_t n() const { return n_; }
    double t_horizon() const { return t_; }
    double step() const { return t_ / static_cast<double>(n_); }
    double node(std::int64_t i) const { return static_cast<double>(i) * t_ / static_cast<double>(n_); }

    /// Index k with t_k <= t < t_{k+1} (clamped to n-1 at t = T).
    std::int64_t floor_index(double t) const {
        auto k = static_cast<std::int64_t>(std::floor(t * static_cast<double>(n_) / t_));
        if (k < 0) k = 0;
        if (k > n_ - 1) k = n_ - 1;
        return k;
    }

    /// eta(t) = t_i for t_i <= t < t_{i+1}.
    double eta(double t) const {
        if (t >= t_) return t_;
        return node(static_cast<std::int64_t>(std::floor(t * static_cast<double>(n_) / t_)));
    }

    /// eps(t) = t_{i+1} for t_i < t <= t_{i+1}.
    double eps(double t) const {
        if (t <= 0.0) return 0.0;
        return node(static_cast<std::int64_t>(std::ceil(t * static_cast<double>(n_) / t_)));
    }

    bool operator==(const UniformGrid& o) const { return n_ == o.n_ && t_ == o.t_; }

  private:
    std::int64_t n_;
    double t_;
};

/// Rate factor gamma_n: n^{2H-1/2} below 3/4, n/sqrt(log n) at 3/4, n above.
inline double gamma_n(std::int64_t n, const HurstParam& h) {
    const double nd = static_cast<double>(n);
    if (h.is_three_quarters()) {
        if (n < 2) throw std::invalid_argument("gamma_n: need n >= 2 when H = 3/4");
        return nd / std::sqrt(std::log(nd));
    }
    if (h.value() < 0.75) return std::pow(nd, 2.0 * h.value() - 0.5);
    return nd;
}

}  // namespace fraceuler
