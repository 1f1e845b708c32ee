#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "ttlab/bitstream.hpp"

namespace ttlab {

// A set of natural numbers given by a finite description. Infiniteness is
// asserted by the constructing caller, not proved; the library only ever
// verifies facts of the form "has at least k elements below the horizon".
class IndexSet {
public:
    enum class Kind { Tail, Arithmetic, ExplicitFinite, StreamBacked };

    static IndexSet tail(std::uint64_t m) {
        IndexSet s;
        s.kind_ = Kind::Tail;
        s.a_ = m;
        s.infinite_ = true;
        return s;
    }

    // { a*n + b : n >= 0 }, a >= 1.
    static IndexSet arithmetic(std::uint64_t a, std::uint64_t b) {
        if (a == 0) throw std::invalid_argument("index set: arithmetic step must be positive");
        IndexSet s;
        s.kind_ = Kind::Arithmetic;
        s.a_ = a;
        s.b_ = b;
        s.infinite_ = true;
        return s;
    }

    static IndexSet explicit_finite(std::vector<std::uint64_t> members) {
        std::sort(members.begin(), members.end());
        members.erase(std::unique(members.begin(), members.end()), members.end());
        IndexSet s;
        s.kind_ = Kind::ExplicitFinite;
        s.members_ = std::move(members);
        s.infinite_ = false;
        return s;
    }

    // Membership read off a stream; the caller asserts whether the stream
    // holds infinitely many 1s.
    static IndexSet stream_backed(BitStream indicator, bool asserted_infinite) {
        IndexSet s;
        s.kind_ = Kind::StreamBacked;
        s.indicator_ = std::move(indicator);
        s.infinite_ = asserted_infinite;
        return s;
    }

    Kind kind() const { return kind_; }
    bool asserted_infinite() const { return infinite_; }

    bool contains(std::uint64_t n) const {
        switch (kind_) {
            case Kind::Tail: return n >= a_;
            case Kind::Arithmetic: return n >= b_ && (n - b_) % a_ == 0;
            case Kind::ExplicitFinite:
                return std::binary_search(members_.begin(), members_.end(), n);
            case Kind::StreamBacked: return indicator_.bit(n) == 1;
        }
        return false;
    }

    // Strictly increasing enumeration of members below the horizon.
    std::vector<std::uint64_t> members_below(std::uint64_t horizon) const {
        std::vector<std::uint64_t> out;
        switch (kind_) {
            case Kind::Tail:
                for (std::uint64_t n = a_; n < horizon; ++n) out.push_back(n);
                break;
            case Kind::Arithmetic:
                for (std::uint64_t n = b_; n < horizon; n += a_) out.push_back(n);
                break;
            case Kind::ExplicitFinite:
                for (auto m : members_)
                    if (m < horizon) out.push_back(m);
                break;
            case Kind::StreamBacked:
                for (std::uint64_t n = 0; n < horizon; ++n)
                    if (indicator_.bit(n)) out.push_back(n);
                break;
        }
        return out;
    }

    // n-th member in increasing order (from 0); searches below horizon only.
    std::uint64_t nth(std::uint64_t n, std::uint64_t horizon) const {
        std::uint64_t seen = 0;
        for (std::uint64_t v = 0; v < horizon; ++v) {
            if (contains(v)) {
                if (seen == n) return v;
                ++seen;
            }
        }
        throw std::runtime_error("index set: not found within horizon");
    }

    nlohmann::json describe() const {
        switch (kind_) {
            case Kind::Tail: return {{"kind", "tail"}, {"from", a_}};
            case Kind::Arithmetic: return {{"kind", "arithmetic"}, {"a", a_}, {"b", b_}};
            case Kind::ExplicitFinite: return {{"kind", "finite"}, {"members", members_}};
            case Kind::StreamBacked:
                return {{"kind", "stream"},
                        {"indicator", indicator_.describe()},
                        {"infinite", infinite_}};
        }
        throw std::logic_error("index set: bad kind");
    }

private:
    Kind kind_ = Kind::ExplicitFinite;
    std::uint64_t a_ = 0, b_ = 0;
    std::vector<std::uint64_t> members_;
    BitStream indicator_;
    bool infinite_ = false;
};

} // namespace ttlab
