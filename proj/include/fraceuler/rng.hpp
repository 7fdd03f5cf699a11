#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace fraceuler {

// Reproducibility contract: every random draw in the library flows through the
// generators below, so results are a pure function of the 64-bit seeds handed in.
// Monte Carlo loops derive one stream per path index, which keeps output
// independent of scheduling and thread count.

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// xoshiro256++ seeded through SplitMix64.
class Xoshiro256 {
  public:
    explicit Xoshiro256(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& w : s_) w = splitmix64(sm);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    std::uint32_t next_u32() { return static_cast<std::uint32_t>(next_u64() >> 32); }

    /// Uniform on (0,1), never exactly 0 or 1.
    double uniform01() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::array<std::uint64_t, 4> s_{};
};

/// Derive a decorrelated child seed from (master, index); used as split(master, path_index).
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    std::uint64_t sm = master ^ (0x9E3779B97F4A7C15ULL * (index + 0x632BE59BD9B4E019ULL));
    std::uint64_t a = splitmix64(sm);
    return a ^ splitmix64(sm);
}

namespace detail {

// Marsaglia-Tsang ziggurat tables (128 strips), built once at first use.
struct ZigguratTables {
    std::array<std::uint32_t, 128> kn{};
    std::array<double, 128> wn{};
    std::array<double, 128> fn{};

    ZigguratTables() {
        const double m1 = 2147483648.0;
        double dn = 3.442619855899, tn = dn;
        const double vn = 9.91256303526217e-3;
        double q = vn / std::exp(-0.5 * dn * dn);
        kn[0] = static_cast<std::uint32_t>((dn / q) * m1);
        kn[1] = 0;
        wn[0] = q / m1;
        wn[127] = dn / m1;
        fn[0] = 1.0;
        fn[127] = std::exp(-0.5 * dn * dn);
        for (int i = 126; i >= 1; --i) {
            dn = std::sqrt(-2.0 * std::log(vn / dn + std::exp(-0.5 * dn * dn)));
            kn[i + 1] = static_cast<std::uint32_t>((dn / tn) * m1);
            tn = dn;
            fn[i] = std::exp(-0.5 * dn * dn);
            wn[i] = dn / m1;
        }
    }
};

inline const ZigguratTables& ziggurat_tables() {
    static const ZigguratTables tables;
    return tables;
}

}  // namespace detail

/// Standard normal stream; ziggurat over xoshiro256++.
class GaussianRng {
  public:
    explicit GaussianRng(std::uint64_t seed) : rng_(seed) {}

    std::uint64_t next_u64() { return rng_.next_u64(); }
    double uniform01() { return rng_.uniform01(); }

    double normal() {
        const auto& t = detail::ziggurat_tables();
        for (;;) {
            const auto hz = static_cast<std::int32_t>(rng_.next_u32());
            const std::uint32_t iz = static_cast<std::uint32_t>(hz) & 127u;
            const std::uint32_t az =
                hz < 0 ? static_cast<std::uint32_t>(-static_cast<std::int64_t>(hz))
                       : static_cast<std::uint32_t>(hz);
            if (az < t.kn[iz]) return hz * t.wn[iz];

            const double r = 3.442619855899;
            double x = hz * t.wn[iz];
            if (iz == 0) {
                double y;
                do {
                    x = -std::log(rng_.uniform01()) / r;
                    y = -std::log(rng_.uniform01());
                } while (y + y < x * x);
                return hz > 0 ? r + x : -(r + x);
            }
            if (t.fn[iz] + rng_.uniform01() * (t.fn[iz - 1] - t.fn[iz]) <
                std::exp(-0.5 * x * x))
                return x;
            // fall through: redraw
        }
    }

    void fill_normal(double* dst, std::size_t count) {
        for (std::size_t i = 0; i < count; ++i) dst[i] = normal();
    }

  private:
    Xoshiro256 rng_;
};

}  // namespace fraceuler
