#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>

#include "fraceuler/fbm.hpp"

namespace fraceuler {

// Binary path dump, little-endian:
//   magic "FBM1", u32 n, u32 m, f64 T, f64 H, u64 seed, then m*(n+1) f64 values
//   (component-major).

static_assert(std::endian::native == std::endian::little,
              "binary path dump assumes a little-endian host");

inline void write_fbm_dump(const FbmPath& path, const std::string& filename) {
    std::ofstream out(filename, std::ios::binary);
    if (!out) throw std::runtime_error("write_fbm_dump: cannot open " + filename);
    const char magic[4] = {'F', 'B', 'M', '1'};
    const auto n = static_cast<std::uint32_t>(path.grid().n());
    const auto m = static_cast<std::uint32_t>(path.m());
    const double t = path.grid().t_horizon();
    const double h = path.hurst().value();
    const std::uint64_t seed = path.seed_tag();
    out.write(magic, 4);
    out.write(reinterpret_cast<const char*>(&n), sizeof n);
    out.write(reinterpret_cast<const char*>(&m), sizeof m);
    out.write(reinterpret_cast<const char*>(&t), sizeof t);
    out.write(reinterpret_cast<const char*>(&h), sizeof h);
    out.write(reinterpret_cast<const char*>(&seed), sizeof seed);
    const auto& raw = path.raw();
    out.write(reinterpret_cast<const char*>(raw.data()),
              static_cast<std::streamsize>(raw.size() * sizeof(double)));
    if (!out) throw std::runtime_error("write_fbm_dump: write failed for " + filename);
}

inline FbmPath read_fbm_dump(const std::string& filename) {
    std::ifstream in(filename, std::ios::binary);
    if (!in) throw std::runtime_error("read_fbm_dump: cannot open " + filename);
    char magic[4] = {};
    std::uint32_t n = 0, m = 0;
    double t = 0.0, h = 0.0;
    std::uint64_t seed = 0;
    in.read(magic, 4);
    if (std::memcmp(magic, "FBM1", 4) != 0)
        throw std::runtime_error("read_fbm_dump: bad magic in " + filename);
    in.read(reinterpret_cast<char*>(&n), sizeof n);
    in.read(reinterpret_cast<char*>(&m), sizeof m);
    in.read(reinterpret_cast<char*>(&t), sizeof t);
    in.read(reinterpret_cast<char*>(&h), sizeof h);
    in.read(reinterpret_cast<char*>(&seed), sizeof seed);
    std::vector<double> values(static_cast<std::size_t>(m) * (n + 1));
    in.read(reinterpret_cast<char*>(values.data()),
            static_cast<std::streamsize>(values.size() * sizeof(double)));
    if (!in) throw std::runtime_error("read_fbm_dump: truncated file " + filename);
    return FbmPath(UniformGrid(n, t), HurstParam(h), static_cast<int>(m), seed,
                   std::move(values));
}

}  // namespace fraceuler
