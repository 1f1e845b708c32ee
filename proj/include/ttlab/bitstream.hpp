#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

namespace ttlab {

using Bit = int;

// Deterministic 64-bit mixer (splitmix64 finalizer). Used for seeded
// pseudorandom streams and for test data generation; never std::rand, so
// every run of every binary sees identical bits.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ull;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
    std::uint64_t below(std::uint64_t k) { return k == 0 ? 0 : next() % k; }
    bool chance(std::uint64_t num, std::uint64_t den) { return below(den) < num; }

private:
    std::uint64_t state_;
};

// A stream description node. Streams are immutable after construction and
// evaluation must be thread-safe; nodes that memoize internally guard the
// memo with a mutex.
class StreamNode {
public:
    virtual ~StreamNode() = default;
    virtual Bit bit(std::uint64_t n) const = 0;
    virtual nlohmann::json describe() const = 0;
};

// Value-semantic handle on an immutable stream description.
class BitStream {
public:
    BitStream() = default;
    explicit BitStream(std::shared_ptr<const StreamNode> node) : node_(std::move(node)) {}

    bool valid() const { return static_cast<bool>(node_); }

    Bit bit(std::uint64_t n) const {
        if (!node_) throw std::logic_error("bitstream: empty handle");
        return node_->bit(n);
    }

    std::vector<std::uint8_t> prefix(std::uint64_t n) const {
        std::vector<std::uint8_t> out(n);
        for (std::uint64_t i = 0; i < n; ++i) out[i] = static_cast<std::uint8_t>(bit(i));
        return out;
    }

    nlohmann::json describe() const {
        if (!node_) throw std::logic_error("bitstream: empty handle");
        return node_->describe();
    }

    std::shared_ptr<const StreamNode> node() const { return node_; }

    static BitStream constant(Bit b);
    static BitStream periodic(std::vector<std::uint8_t> pattern);
    static BitStream periodic(std::string_view pattern); // e.g. "01"
    static BitStream prng(std::uint64_t seed);
    static BitStream from_file(const std::string& path);
    static BitStream explicit_bits(std::vector<std::uint8_t> prefix, Bit tail);

private:
    std::shared_ptr<const StreamNode> node_;
};

// A_0 (+) A_1 = {2k : k in A_0} u {2k+1 : k in A_1}: even bits from the
// first operand, odd bits from the second.
BitStream join(BitStream a, BitStream b);

BitStream complement(BitStream s);

// parity 0 recovers the even-position subsequence, parity 1 the odd one;
// half(join(a, b), 0) == a bitwise.
BitStream half(BitStream s, int parity);

// Column i under the Cantor pairing: column(s, i)(n) = s(<i, n>).
BitStream column(BitStream s, std::uint64_t i);

// Finitely many point overrides on top of a base stream.
BitStream overlay(BitStream base, std::vector<std::pair<std::uint64_t, Bit>> sets);

// A (+)_X B: positions where x holds 1 carry A (indexed by rank among the
// 1s), positions where x holds 0 carry B (indexed by rank among the 0s).
// Evaluating position p needs only ranks below p, so every position is
// defined; the node memoizes prefix rank counts of x under a mutex.
BitStream join_over(BitStream a, BitStream b, BitStream x);

struct StreamFamily {
    enum class Mode { Cycle, Pad };
    std::vector<BitStream> columns;
    Mode mode = Mode::Cycle;
    BitStream pad;

    BitStream at(std::uint64_t i) const {
        if (columns.empty()) throw std::invalid_argument("stream family: no columns");
        if (i < columns.size()) return columns[i];
        if (mode == Mode::Cycle) return columns[i % columns.size()];
        if (!pad.valid()) throw std::invalid_argument("stream family: missing pad stream");
        return pad;
    }

    nlohmann::json describe() const;
};

// (+)_i F(i): bit <i, n> of the result is bit n of F(i).
BitStream infinite_join(StreamFamily family);

// Position of the n-th 1 of s (n counted from 0). Throws
// "not found within horizon" when fewer than n+1 ones occur below horizon.
std::uint64_t principal_position(const BitStream& s, std::uint64_t n, std::uint64_t horizon);

// MSB-first bit packing, shared by file-backed streams, emitted bit files
// and the external estimator protocol.
std::vector<std::uint8_t> pack_bits(const std::vector<std::uint8_t>& bits);
std::vector<std::uint8_t> unpack_bits(const std::vector<std::uint8_t>& bytes, std::uint64_t bit_count);

} // namespace ttlab
