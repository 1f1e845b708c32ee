#include "ttlab/bitstream.hpp"

#include <algorithm>
#include <fstream>
#include <mutex>

#include "ttlab/pairing.hpp"

namespace ttlab {

namespace {

std::string bits_to_string(const std::vector<std::uint8_t>& bits) {
    std::string s;
    s.reserve(bits.size());
    for (auto b : bits) s += b ? '1' : '0';
    return s;
}

std::vector<std::uint8_t> string_to_bits(std::string_view s) {
    std::vector<std::uint8_t> bits;
    bits.reserve(s.size());
    for (char c : s) {
        if (c != '0' && c != '1') throw std::invalid_argument("bit pattern: expected only 0/1");
        bits.push_back(static_cast<std::uint8_t>(c - '0'));
    }
    return bits;
}

class ConstantNode final : public StreamNode {
public:
    explicit ConstantNode(Bit b) : bit_(b) {}
    Bit bit(std::uint64_t) const override { return bit_; }
    nlohmann::json describe() const override {
        return {{"kind", "constant"}, {"bit", bit_}};
    }

private:
    Bit bit_;
};

class PeriodicNode final : public StreamNode {
public:
    explicit PeriodicNode(std::vector<std::uint8_t> pattern) : pattern_(std::move(pattern)) {
        if (pattern_.empty()) throw std::invalid_argument("periodic stream: empty pattern");
    }
    Bit bit(std::uint64_t n) const override { return pattern_[n % pattern_.size()]; }
    nlohmann::json describe() const override {
        return {{"kind", "periodic"}, {"pattern", bits_to_string(pattern_)}};
    }

private:
    std::vector<std::uint8_t> pattern_;
};

class PrngNode final : public StreamNode {
public:
    explicit PrngNode(std::uint64_t seed) : seed_(seed) {}
    Bit bit(std::uint64_t n) const override {
        return static_cast<Bit>(mix64(seed_ ^ mix64(n)) & 1u);
    }
    nlohmann::json describe() const override {
        return {{"kind", "prng"}, {"seed", seed_}};
    }

private:
    std::uint64_t seed_;
};

class FileNode final : public StreamNode {
public:
    explicit FileNode(std::string path) : path_(std::move(path)) {
        std::ifstream in(path_, std::ios::binary);
        if (!in) throw std::runtime_error("file stream: cannot open " + path_);
        bytes_.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    }
    Bit bit(std::uint64_t n) const override {
        std::uint64_t byte = n / 8;
        if (byte >= bytes_.size()) throw std::out_of_range("file stream: horizon exceeded");
        return (bytes_[byte] >> (7 - n % 8)) & 1;
    }
    nlohmann::json describe() const override {
        return {{"kind", "file"}, {"path", path_}};
    }

private:
    std::string path_;
    std::vector<std::uint8_t> bytes_;
};

class ExplicitNode final : public StreamNode {
public:
    ExplicitNode(std::vector<std::uint8_t> prefix, Bit tail)
        : prefix_(std::move(prefix)), tail_(tail) {}
    Bit bit(std::uint64_t n) const override {
        return n < prefix_.size() ? prefix_[n] : tail_;
    }
    nlohmann::json describe() const override {
        return {{"kind", "explicit"}, {"prefix", bits_to_string(prefix_)}, {"tail", tail_}};
    }

private:
    std::vector<std::uint8_t> prefix_;
    Bit tail_;
};

class JoinNode final : public StreamNode {
public:
    JoinNode(BitStream a, BitStream b) : a_(std::move(a)), b_(std::move(b)) {}
    Bit bit(std::uint64_t n) const override {
        return (n % 2 == 0) ? a_.bit(n / 2) : b_.bit(n / 2);
    }
    nlohmann::json describe() const override {
        return {{"kind", "join"}, {"a", a_.describe()}, {"b", b_.describe()}};
    }

private:
    BitStream a_, b_;
};

class ComplementNode final : public StreamNode {
public:
    explicit ComplementNode(BitStream s) : s_(std::move(s)) {}
    Bit bit(std::uint64_t n) const override { return 1 - s_.bit(n); }
    nlohmann::json describe() const override {
        return {{"kind", "complement"}, {"of", s_.describe()}};
    }

private:
    BitStream s_;
};

class HalfNode final : public StreamNode {
public:
    HalfNode(BitStream s, int parity) : s_(std::move(s)), parity_(parity) {
        if (parity_ != 0 && parity_ != 1) throw std::invalid_argument("half: parity must be 0 or 1");
    }
    Bit bit(std::uint64_t n) const override { return s_.bit(2 * n + static_cast<std::uint64_t>(parity_)); }
    nlohmann::json describe() const override {
        return {{"kind", "half"}, {"of", s_.describe()}, {"parity", parity_}};
    }

private:
    BitStream s_;
    int parity_;
};

class ColumnNode final : public StreamNode {
public:
    ColumnNode(BitStream s, std::uint64_t index) : s_(std::move(s)), index_(index) {}
    Bit bit(std::uint64_t n) const override { return s_.bit(pairing::encode(index_, n)); }
    nlohmann::json describe() const override {
        return {{"kind", "column"}, {"of", s_.describe()}, {"index", index_}};
    }

private:
    BitStream s_;
    std::uint64_t index_;
};

class OverlayNode final : public StreamNode {
public:
    OverlayNode(BitStream base, std::vector<std::pair<std::uint64_t, Bit>> sets)
        : base_(std::move(base)), sets_(std::move(sets)) {
        std::sort(sets_.begin(), sets_.end());
        for (std::size_t i = 1; i < sets_.size(); ++i)
            if (sets_[i].first == sets_[i - 1].first)
                throw std::invalid_argument("overlay: duplicate position");
    }
    Bit bit(std::uint64_t n) const override {
        auto it = std::lower_bound(sets_.begin(), sets_.end(), std::make_pair(n, 0),
                                   [](const auto& a, const auto& b) { return a.first < b.first; });
        if (it != sets_.end() && it->first == n) return it->second;
        return base_.bit(n);
    }
    nlohmann::json describe() const override {
        nlohmann::json pts = nlohmann::json::array();
        for (const auto& [pos, b] : sets_) pts.push_back({pos, b});
        return {{"kind", "overlay"}, {"base", base_.describe()}, {"set", pts}};
    }

private:
    BitStream base_;
    std::vector<std::pair<std::uint64_t, Bit>> sets_;
};

class JoinOverNode final : public StreamNode {
public:
    JoinOverNode(BitStream a, BitStream b, BitStream x)
        : a_(std::move(a)), b_(std::move(b)), x_(std::move(x)) {}

    Bit bit(std::uint64_t n) const override {
        std::uint64_t ones = ones_below(n);
        if (x_.bit(n)) return a_.bit(ones);
        return b_.bit(n - ones);
    }

    nlohmann::json describe() const override {
        return {{"kind", "join_over"},
                {"a", a_.describe()},
                {"b", b_.describe()},
                {"x", x_.describe()}};
    }

private:
    // Count of 1s of x strictly below n, memoized as a growing prefix table.
    std::uint64_t ones_below(std::uint64_t n) const {
        std::lock_guard<std::mutex> lock(mu_);
        while (ones_prefix_.size() <= n) {
            std::uint64_t i = ones_prefix_.size();
            std::uint64_t prev = i == 0 ? 0 : ones_prefix_.back();
            if (i == 0) {
                ones_prefix_.push_back(0);
                continue;
            }
            ones_prefix_.push_back(prev + static_cast<std::uint64_t>(x_.bit(i - 1)));
        }
        return ones_prefix_[n];
    }

    BitStream a_, b_, x_;
    mutable std::mutex mu_;
    mutable std::vector<std::uint64_t> ones_prefix_;
};

class InfiniteJoinNode final : public StreamNode {
public:
    explicit InfiniteJoinNode(StreamFamily family) : family_(std::move(family)) {}
    Bit bit(std::uint64_t n) const override {
        auto [i, m] = pairing::decode(n);
        return family_.at(i).bit(m);
    }
    nlohmann::json describe() const override {
        nlohmann::json j = family_.describe();
        j["kind"] = "infinite_join";
        return j;
    }

private:
    StreamFamily family_;
};

} // namespace

BitStream BitStream::constant(Bit b) {
    if (b != 0 && b != 1) throw std::invalid_argument("constant stream: bit must be 0 or 1");
    return BitStream(std::make_shared<ConstantNode>(b));
}

BitStream BitStream::periodic(std::vector<std::uint8_t> pattern) {
    return BitStream(std::make_shared<PeriodicNode>(std::move(pattern)));
}

BitStream BitStream::periodic(std::string_view pattern) {
    return BitStream(std::make_shared<PeriodicNode>(string_to_bits(pattern)));
}

BitStream BitStream::prng(std::uint64_t seed) {
    return BitStream(std::make_shared<PrngNode>(seed));
}

BitStream BitStream::from_file(const std::string& path) {
    return BitStream(std::make_shared<FileNode>(path));
}

BitStream BitStream::explicit_bits(std::vector<std::uint8_t> prefix, Bit tail) {
    return BitStream(std::make_shared<ExplicitNode>(std::move(prefix), tail));
}

BitStream join(BitStream a, BitStream b) {
    return BitStream(std::make_shared<JoinNode>(std::move(a), std::move(b)));
}

BitStream complement(BitStream s) {
    return BitStream(std::make_shared<ComplementNode>(std::move(s)));
}

BitStream half(BitStream s, int parity) {
    return BitStream(std::make_shared<HalfNode>(std::move(s), parity));
}

BitStream column(BitStream s, std::uint64_t i) {
    return BitStream(std::make_shared<ColumnNode>(std::move(s), i));
}

BitStream overlay(BitStream base, std::vector<std::pair<std::uint64_t, Bit>> sets) {
    return BitStream(std::make_shared<OverlayNode>(std::move(base), std::move(sets)));
}

BitStream join_over(BitStream a, BitStream b, BitStream x) {
    return BitStream(std::make_shared<JoinOverNode>(std::move(a), std::move(b), std::move(x)));
}

nlohmann::json StreamFamily::describe() const {
    nlohmann::json cols = nlohmann::json::array();
    for (const auto& c : columns) cols.push_back(c.describe());
    nlohmann::json j = {{"columns", cols}, {"mode", mode == Mode::Cycle ? "cycle" : "pad"}};
    if (mode == Mode::Pad) j["pad"] = pad.describe();
    return j;
}

BitStream infinite_join(StreamFamily family) {
    if (family.columns.empty()) throw std::invalid_argument("infinite_join: no columns");
    return BitStream(std::make_shared<InfiniteJoinNode>(std::move(family)));
}

std::uint64_t principal_position(const BitStream& s, std::uint64_t n, std::uint64_t horizon) {
    std::uint64_t seen = 0;
    for (std::uint64_t p = 0; p < horizon; ++p) {
        if (s.bit(p)) {
            if (seen == n) return p;
            ++seen;
        }
    }
    throw std::runtime_error("principal function: not found within horizon");
}

std::vector<std::uint8_t> pack_bits(const std::vector<std::uint8_t>& bits) {
    std::vector<std::uint8_t> bytes((bits.size() + 7) / 8, 0);
    for (std::size_t i = 0; i < bits.size(); ++i)
        if (bits[i]) bytes[i / 8] |= static_cast<std::uint8_t>(1u << (7 - i % 8));
    return bytes;
}

std::vector<std::uint8_t> unpack_bits(const std::vector<std::uint8_t>& bytes, std::uint64_t bit_count) {
    if (bit_count > bytes.size() * 8) throw std::invalid_argument("unpack_bits: not enough bytes");
    std::vector<std::uint8_t> bits(bit_count);
    for (std::uint64_t i = 0; i < bit_count; ++i)
        bits[i] = (bytes[i / 8] >> (7 - i % 8)) & 1;
    return bits;
}

} // namespace ttlab
