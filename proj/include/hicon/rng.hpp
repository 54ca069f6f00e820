#ifndef HICON_RNG_HPP
#define HICON_RNG_HPP

#include <cstdint>
#include <random>
#include <string_view>

namespace hicon {

// FNV-1a; used to derive per-stage seeds from one master seed.
inline std::uint64_t sub_seed(std::uint64_t master, std::string_view tag) {
    std::uint64_t h = 14695981039346656037ull;
    auto mix = [&](std::uint64_t v) {
        for (int i = 0; i < 8; ++i) {
            h ^= (v >> (8 * i)) & 0xffu;
            h *= 1099511628211ull;
        }
    };
    mix(master);
    for (char c : tag) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    }
    return h;
}

inline std::uint64_t sub_seed(std::uint64_t master, std::string_view tag, std::uint64_t k) {
    return sub_seed(sub_seed(master, tag), "#") ^ (0x9e3779b97f4a7c15ull * (k + 1));
}

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

} // namespace hicon

#endif
