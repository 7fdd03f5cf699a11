#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace fraceuler::detail {

// Iterative radix-2 complex FFT, power-of-two sizes only. Twiddle tables are
// cached per size and shared read-only between threads.

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline std::size_t next_pow2(std::size_t n) {
    std::size_t m = 1;
    while (m < n) m <<= 1;
    return m;
}

struct FftPlan {
    std::size_t n = 0;
    std::vector<std::uint32_t> bitrev;            // permutation indices
    std::vector<std::complex<double>> twiddle;    // w_n^k, k < n/2

    explicit FftPlan(std::size_t size) : n(size) {
        bitrev.resize(n);
        std::uint32_t log2n = 0;
        while ((std::size_t{1} << log2n) < n) ++log2n;
        for (std::size_t i = 0; i < n; ++i) {
            std::uint32_t r = 0, v = static_cast<std::uint32_t>(i);
            for (std::uint32_t b = 0; b < log2n; ++b) {
                r = (r << 1) | (v & 1u);
                v >>= 1;
            }
            bitrev[i] = r;
        }
        twiddle.resize(n / 2);
        const double two_pi = 6.283185307179586476925286766559;
        for (std::size_t k = 0; k < n / 2; ++k) {
            const double a = -two_pi * static_cast<double>(k) / static_cast<double>(n);
            twiddle[k] = {std::cos(a), std::sin(a)};
        }
    }
};

inline const FftPlan& fft_plan(std::size_t n) {
    static std::map<std::size_t, std::unique_ptr<FftPlan>> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, std::make_unique<FftPlan>(n)).first;
    return *it->second;
}

/// In-place forward DFT (negative-exponent convention), unscaled.
inline void fft_inplace(std::complex<double>* a, std::size_t n, bool inverse = false) {
    if (n <= 1) return;
    if (!is_pow2(n)) throw std::invalid_argument("fft_inplace: size must be a power of two");
    const FftPlan& plan = fft_plan(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = plan.bitrev[i];
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t half = len >> 1;
        const std::size_t stride = n / len;
        for (std::size_t start = 0; start < n; start += len) {
            std::size_t tw = 0;
            for (std::size_t k = 0; k < half; ++k, tw += stride) {
                std::complex<double> w = plan.twiddle[tw];
                if (inverse) w = std::conj(w);
                const std::complex<double> u = a[start + k];
                const std::complex<double> v = a[start + k + half] * w;
                a[start + k] = u + v;
                a[start + k + half] = u - v;
            }
        }
    }
    if (inverse) {
        const double scale = 1.0 / static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i) a[i] *= scale;
    }
}

inline void fft_inplace(std::vector<std::complex<double>>& a, bool inverse = false) {
    fft_inplace(a.data(), a.size(), inverse);
}

}  // namespace fraceuler::detail
