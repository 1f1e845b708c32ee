#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ttlab/bitstream.hpp"
#include "ttlab/reduction.hpp"

namespace ttlab {

// Doubly exponential segment boundaries s(k) = 2^(k*k).
struct SegmentSchedule {
    // Throws once 2^(k*k) no longer fits in 64 bits (k >= 8).
    static std::uint64_t s(std::uint64_t k);

    // max{k : s(k) <= n}; empty for n = 0, where no boundary has been passed.
    static std::optional<std::uint64_t> k_of(std::uint64_t n);

    // max{odd k : s(k) <= n}; empty below s(1).
    static std::optional<std::uint64_t> k_odd(std::uint64_t n);
};

// Segment filling driven by an indicator: output(n) = filler(n - s(k)) when
// the indicator holds at k = k_of(n), 0 otherwise; positions before s(0)
// are 0.
BitStream segment_stream(BitStream filler, BitStream indicator);

enum class DoubleSegmentMode {
    ZeroFill,   // segments where join(x0, x0) holds 0 carry filler bits
    FillerFill, // segments where join(x0, x0) holds 1 carry filler bits
};

// Variant indexed by odd k only: k(n) = max{odd k : s(k) <= n}, indicator
// read from X = join(x0, x0); positions below s(1) are 0.
BitStream double_segment_stream(BitStream filler, BitStream x0, DoubleSegmentMode mode);

// Use-adapted boundary schedule:
//   l(0) = lambda(0) = 1,  lambda(k) = lambda(k-1) + l(k-1),
//   l(k) = least 2^(n*n) strictly greater than g(lambda(k)).
// Entries are generated until l exceeds max_position. The bound g must be
// monotone nondecreasing; the construction checks that l comes out
// strictly increasing and throws otherwise.
class WttSchedule {
public:
    WttSchedule(const UseBound& g, std::uint64_t max_position);

    const std::vector<std::uint64_t>& lengths() const { return l_; } // l(k)
    const std::vector<std::uint64_t>& starts() const { return lambda_; } // lambda(k)

    // max{k : l(k) <= n} among generated entries; empty for n = 0.
    std::optional<std::uint64_t> k_of(std::uint64_t n) const;

    // max{k = 2 (mod 3) : l(k) <= n}; empty below l(2).
    std::optional<std::uint64_t> k_mod3(std::uint64_t n) const;

private:
    std::vector<std::uint64_t> l_, lambda_;
};

// Use-adapted segment stream: output(n) = filler(n - l(k)) when the triple
// join of s0 with itself holds at k = max{k = 2 (mod 3) : l(k) <= n}, and 0
// otherwise (including all n below l(2)). The schedule is derived from the
// use bound g up to max_position.
BitStream wtt_stream(BitStream filler, BitStream s0, UseBound g, std::uint64_t max_position);

} // namespace ttlab
