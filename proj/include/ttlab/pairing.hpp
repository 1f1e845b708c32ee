#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>

namespace ttlab {

// Cantor pairing: encode(x, y) = (x+y)(x+y+1)/2 + y.
// Bijective between pairs of naturals and naturals; encode(x, y) >= max(x, y).
namespace pairing {

inline std::uint64_t encode(std::uint64_t x, std::uint64_t y) {
    std::uint64_t s = x + y;
    if (s < x) throw std::overflow_error("pairing: sum overflow");
    // s*(s+1)/2 without intermediate overflow: one factor is even.
    std::uint64_t tri = (s % 2 == 0) ? (s / 2) * (s + 1) : s * ((s + 1) / 2);
    if (s != 0 && tri / ((s % 2 == 0) ? (s / 2) : s) != ((s % 2 == 0) ? (s + 1) : ((s + 1) / 2)))
        throw std::overflow_error("pairing: triangle overflow");
    std::uint64_t z = tri + y;
    if (z < tri) throw std::overflow_error("pairing: encode overflow");
    return z;
}

inline std::pair<std::uint64_t, std::uint64_t> decode(std::uint64_t z) {
    // w = floor((sqrt(8z+1) - 1) / 2), computed with a guess plus correction.
    long double approx = (std::uint64_t)z;
    std::uint64_t w = static_cast<std::uint64_t>((__builtin_sqrtl(8.0L * approx + 1.0L) - 1.0L) / 2.0L);
    auto tri = [](std::uint64_t s) -> std::uint64_t {
        return (s % 2 == 0) ? (s / 2) * (s + 1) : s * ((s + 1) / 2);
    };
    while (tri(w) > z) --w;
    while (tri(w + 1) <= z) ++w;
    std::uint64_t y = z - tri(w);
    std::uint64_t x = w - y;
    return {x, y};
}

} // namespace pairing

} // namespace ttlab
