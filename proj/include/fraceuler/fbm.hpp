#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "fraceuler/core.hpp"
#include "fraceuler/fft.hpp"
#include "fraceuler/rng.hpp"

namespace fraceuler {

struct EmbeddingError : std::runtime_error {
    explicit EmbeddingError(const std::string& what) : std::runtime_error(what) {}
};

/// Covariance of one fBm component: (t^{2H} + s^{2H} - |t-s|^{2H}) / 2.
inline double fbm_covariance(double t, double s, const HurstParam& h) {
    if (t < 0.0 || s < 0.0) throw std::invalid_argument("fbm_covariance: times must be >= 0");
    const double th = h.two_h();
    return 0.5 * (std::pow(t, th) + std::pow(s, th) - std::pow(std::abs(t - s), th));
}

/// Autocorrelation of unit-step increments at lag p:
/// rho_H(p) = (|p+1|^{2H} + |p-1|^{2H} - 2|p|^{2H}) / 2.
inline double increment_correlation(std::int64_t p, const HurstParam& h) {
    const double ap = std::abs(static_cast<double>(p));
    const double th = h.two_h();
    return 0.5 * (std::pow(ap + 1.0, th) + std::pow(std::abs(ap - 1.0), th) -
                  2.0 * std::pow(ap, th));
}

/// Sampled m-dimensional fBm on a uniform grid; values are component-major,
/// component j occupying entries [j*(n+1), (j+1)*(n+1)). values[j][0] = 0.
class FbmPath {
  public:
    FbmPath(UniformGrid grid, HurstParam h, int m, std::uint64_t seed_tag,
            std::vector<double> values)
        : grid_(grid), h_(h), m_(m), seed_tag_(seed_tag), values_(std::move(values)) {
        if (m < 1) throw std::invalid_argument("FbmPath: m must be >= 1");
        if (values_.size() != static_cast<std::size_t>(m) * (grid_.n() + 1))
            throw std::invalid_argument("FbmPath: values size must be m*(n+1)");
    }

    const UniformGrid& grid() const { return grid_; }
    const HurstParam& hurst() const { return h_; }
    int m() const { return m_; }
    std::uint64_t seed_tag() const { return seed_tag_; }

    double value(int comp, std::int64_t i) const {
        return values_[static_cast<std::size_t>(comp) * (grid_.n() + 1) +
                       static_cast<std::size_t>(i)];
    }
    double increment(int comp, std::int64_t k) const {
        return value(comp, k + 1) - value(comp, k);
    }
    std::span<const double> component(int comp) const {
        return {values_.data() + static_cast<std::size_t>(comp) * (grid_.n() + 1),
                static_cast<std::size_t>(grid_.n() + 1)};
    }
    const std::vector<double>& raw() const { return values_; }

  private:
    UniformGrid grid_;
    HurstParam h_;
    int m_;
    std::uint64_t seed_tag_;
    std::vector<double> values_;
};

/// Exact sampler via Cholesky factorization of the increment covariance.
/// Cost is cubic in n at construction; intended for small n and as ground truth.
class CholeskyFbmSampler {
  public:
    CholeskyFbmSampler(UniformGrid grid, HurstParam h, int m, std::int64_t n_cap = 4096)
        : grid_(grid), h_(h), m_(m) {
        const std::int64_t n = grid.n();
        if (n > n_cap)
            throw std::invalid_argument("CholeskyFbmSampler: n exceeds cap (" +
                                        std::to_string(n_cap) + "); use the circulant sampler");
        const double var = std::pow(grid.step(), h.two_h());
        const auto nn = static_cast<std::size_t>(n);
        lower_.assign(nn * nn, 0.0);
        // Toeplitz increment covariance, factored in place.
        std::vector<double> rho(nn);
        for (std::size_t k = 0; k < nn; ++k)
            rho[k] = var * increment_correlation(static_cast<std::int64_t>(k), h);
        for (std::size_t i = 0; i < nn; ++i)
            for (std::size_t j = 0; j <= i; ++j) lower_[i * nn + j] = rho[i - j];
        for (std::size_t j = 0; j < nn; ++j) {
            double d = lower_[j * nn + j];
            for (std::size_t k = 0; k < j; ++k) d -= lower_[j * nn + k] * lower_[j * nn + k];
            if (!(d > 0.0))
                throw FactorizationError(
                    "CholeskyFbmSampler: covariance numerically non-positive-definite at pivot " +
                    std::to_string(j) + "; n too large for float precision");
            const double root = std::sqrt(d);
            lower_[j * nn + j] = root;
            for (std::size_t i = j + 1; i < nn; ++i) {
                double s = lower_[i * nn + j];
                for (std::size_t k = 0; k < j; ++k) s -= lower_[i * nn + k] * lower_[j * nn + k];
                lower_[i * nn + j] = s / root;
            }
        }
    }

    FbmPath sample(std::uint64_t seed) const {
        const auto n = static_cast<std::size_t>(grid_.n());
        std::vector<double> values(static_cast<std::size_t>(m_) * (n + 1));
        std::vector<double> z(n);
        for (int comp = 0; comp < m_; ++comp) {
            GaussianRng rng(derive_seed(seed, static_cast<std::uint64_t>(comp)));
            rng.fill_normal(z.data(), n);
            double* v = values.data() + static_cast<std::size_t>(comp) * (n + 1);
            v[0] = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                double incr = 0.0;
                const double* row = lower_.data() + i * n;
                for (std::size_t k = 0; k <= i; ++k) incr += row[k] * z[k];
                v[i + 1] = v[i] + incr;
            }
        }
        return FbmPath(grid_, h_, m_, seed, std::move(values));
    }

    const UniformGrid& grid() const { return grid_; }

  private:
    UniformGrid grid_;
    HurstParam h_;
    int m_;
    std::vector<double> lower_;
};

/// Exact sampler via circulant embedding of the increment covariance, O(n log n)
/// per path. The embedding is padded to a power of two; a block of a longer
/// stationary increment sequence has the same law, so padding stays exact.
class CirculantFbmSampler {
  public:
    CirculantFbmSampler(UniformGrid grid, HurstParam h, int m)
        : grid_(grid), h_(h), m_(m) {
        const auto n = static_cast<std::size_t>(grid.n());
        emb_ = detail::next_pow2(std::max<std::size_t>(2 * n, 2));
        const double var = std::pow(grid.step(), h.two_h());
        std::vector<std::complex<double>> c(emb_);
        for (std::size_t k = 0; k < emb_; ++k) {
            const std::size_t lag = std::min(k, emb_ - k);
            c[k] = var * increment_correlation(static_cast<std::int64_t>(lag), h);
        }
        detail::fft_inplace(c);
        scale_.resize(emb_);
        double max_eig = 0.0;
        for (const auto& e : c) max_eig = std::max(max_eig, e.real());
        const double tol = 1e-9 * std::max(max_eig, 1.0);
        for (std::size_t k = 0; k < emb_; ++k) {
            double eig = c[k].real();
            if (eig < -tol)
                throw EmbeddingError("CirculantFbmSampler: negative circulant eigenvalue " +
                                     std::to_string(eig) + " at bin " + std::to_string(k));
            if (eig < 0.0) eig = 0.0;
            scale_[k] = std::sqrt(eig / static_cast<double>(emb_));
        }
    }

    FbmPath sample(std::uint64_t seed) const {
        const auto n = static_cast<std::size_t>(grid_.n());
        std::vector<double> values(static_cast<std::size_t>(m_) * (n + 1));
        std::vector<std::complex<double>> a(emb_);
        // One complex transform yields two independent increment vectors
        // (real and imaginary parts), so components are generated in pairs.
        for (int pair = 0; 2 * pair < m_; ++pair) {
            GaussianRng rng(derive_seed(seed, 0x5157ULL + static_cast<std::uint64_t>(pair)));
            for (std::size_t k = 0; k < emb_; ++k) {
                const double zr = rng.normal();
                const double zi = rng.normal();
                a[k] = {scale_[k] * zr, scale_[k] * zi};
            }
            detail::fft_inplace(a);
            const int ca = 2 * pair;
            const int cb = 2 * pair + 1;
            double* va = values.data() + static_cast<std::size_t>(ca) * (n + 1);
            va[0] = 0.0;
            for (std::size_t i = 0; i < n; ++i) va[i + 1] = va[i] + a[i].real();
            if (cb < m_) {
                double* vb = values.data() + static_cast<std::size_t>(cb) * (n + 1);
                vb[0] = 0.0;
                for (std::size_t i = 0; i < n; ++i) vb[i + 1] = vb[i] + a[i].imag();
            }
        }
        return FbmPath(grid_, h_, m_, seed, std::move(values));
    }

    const UniformGrid& grid() const { return grid_; }

  private:
    UniformGrid grid_;
    HurstParam h_;
    int m_;
    std::size_t emb_;
    std::vector<double> scale_;
};

inline FbmPath sample_fbm_cholesky(const UniformGrid& grid, const HurstParam& h, int m,
                                   std::uint64_t seed, std::int64_t n_cap = 4096) {
    return CholeskyFbmSampler(grid, h, m, n_cap).sample(seed);
}

inline FbmPath sample_fbm_circulant(const UniformGrid& grid, const HurstParam& h, int m,
                                    std::uint64_t seed) {
    return CirculantFbmSampler(grid, h, m).sample(seed);
}

/// Subsample a path onto the coarser grid with n/factor steps. Values at shared
/// nodes are kept bit-exactly; coarse increments telescope over fine ones.
inline FbmPath coarsen(const FbmPath& path, std::int64_t factor) {
    if (factor < 1) throw std::invalid_argument("coarsen: factor must be >= 1");
    const std::int64_t n = path.grid().n();
    if (n % factor != 0)
        throw std::invalid_argument("coarsen: factor " + std::to_string(factor) +
                                    " does not divide n = " + std::to_string(n));
    const std::int64_t nc = n / factor;
    std::vector<double> values(static_cast<std::size_t>(path.m()) * (nc + 1));
    for (int comp = 0; comp < path.m(); ++comp)
        for (std::int64_t i = 0; i <= nc; ++i)
            values[static_cast<std::size_t>(comp) * (nc + 1) + i] = path.value(comp, i * factor);
    return FbmPath(UniformGrid(nc, path.grid().t_horizon()), path.hurst(), path.m(),
                   path.seed_tag(), std::move(values));
}

}  // namespace fraceuler
