#include "ttlab/segments.hpp"

#include <stdexcept>

namespace ttlab {

std::uint64_t SegmentSchedule::s(std::uint64_t k) {
    if (k >= 8) throw std::overflow_error("segment schedule: 2^(k*k) overflows 64 bits");
    return std::uint64_t{1} << (k * k);
}

std::optional<std::uint64_t> SegmentSchedule::k_of(std::uint64_t n) {
    if (n == 0) return std::nullopt;
    std::uint64_t k = 0;
    while (k + 1 < 8 && s(k + 1) <= n) ++k;
    return k;
}

std::optional<std::uint64_t> SegmentSchedule::k_odd(std::uint64_t n) {
    auto k = k_of(n);
    if (!k) return std::nullopt;
    std::uint64_t v = *k;
    if (v % 2 == 0) {
        if (v == 0) return std::nullopt;
        --v;
    }
    return v;
}

namespace {

class SegmentNode final : public StreamNode {
public:
    SegmentNode(BitStream filler, BitStream indicator)
        : filler_(std::move(filler)), indicator_(std::move(indicator)) {}

    Bit bit(std::uint64_t n) const override {
        auto k = SegmentSchedule::k_of(n);
        if (!k) return 0;
        if (indicator_.bit(*k) == 0) return 0;
        return filler_.bit(n - SegmentSchedule::s(*k));
    }

    nlohmann::json describe() const override {
        return {{"kind", "segment"},
                {"filler", filler_.describe()},
                {"indicator", indicator_.describe()}};
    }

private:
    BitStream filler_, indicator_;
};

class DoubleSegmentNode final : public StreamNode {
public:
    DoubleSegmentNode(BitStream filler, BitStream x0, DoubleSegmentMode mode)
        : filler_(std::move(filler)), x0_(std::move(x0)),
          x_(join(x0_, x0_)), mode_(mode) {}

    Bit bit(std::uint64_t n) const override {
        auto k = SegmentSchedule::k_odd(n);
        if (!k) return 0;
        int want = mode_ == DoubleSegmentMode::FillerFill ? 1 : 0;
        if (x_.bit(*k) != want) return 0;
        return filler_.bit(n - SegmentSchedule::s(*k));
    }

    nlohmann::json describe() const override {
        return {{"kind", "double_segment"},
                {"filler", filler_.describe()},
                {"x0", x0_.describe()},
                {"mode", mode_ == DoubleSegmentMode::FillerFill ? "filler_fill" : "zero_fill"}};
    }

private:
    BitStream filler_, x0_, x_;
    DoubleSegmentMode mode_;
};

} // namespace

BitStream segment_stream(BitStream filler, BitStream indicator) {
    return BitStream(std::make_shared<SegmentNode>(std::move(filler), std::move(indicator)));
}

BitStream double_segment_stream(BitStream filler, BitStream x0, DoubleSegmentMode mode) {
    return BitStream(std::make_shared<DoubleSegmentNode>(std::move(filler), std::move(x0), mode));
}

WttSchedule::WttSchedule(const UseBound& g, std::uint64_t max_position) {
    l_.push_back(1);
    lambda_.push_back(1);
    while (l_.back() <= max_position) {
        if (lambda_.back() > UINT64_MAX - l_.back())
            throw std::overflow_error("wtt schedule: start position overflows 64 bits");
        std::uint64_t lam = lambda_.back() + l_.back();
        std::uint64_t gv = g.monotone(lam);
        std::uint64_t len = 0;
        bool found = false;
        for (std::uint64_t n = 0; n * n < 64; ++n) {
            std::uint64_t cand = std::uint64_t{1} << (n * n);
            if (cand > gv) {
                len = cand;
                found = true;
                break;
            }
        }
        if (!found)
            throw std::overflow_error("wtt schedule: segment length overflows 64 bits");
        if (len <= l_.back())
            throw std::invalid_argument(
                "wtt schedule: lengths not strictly increasing; use bound grows too slowly");
        lambda_.push_back(lam);
        l_.push_back(len);
    }
}

std::optional<std::uint64_t> WttSchedule::k_of(std::uint64_t n) const {
    std::optional<std::uint64_t> best;
    for (std::size_t k = 0; k < l_.size() && l_[k] <= n; ++k) best = k;
    return best;
}

std::optional<std::uint64_t> WttSchedule::k_mod3(std::uint64_t n) const {
    std::optional<std::uint64_t> best;
    for (std::size_t k = 0; k < l_.size() && l_[k] <= n; ++k)
        if (k % 3 == 2) best = k;
    return best;
}

namespace {

class WttNode final : public StreamNode {
public:
    WttNode(BitStream filler, BitStream s0, UseBound g, std::uint64_t max_position)
        : filler_(std::move(filler)), s0_(std::move(s0)), g_(std::move(g)),
          max_position_(max_position), sched_(g_, max_position) {}

    Bit bit(std::uint64_t n) const override {
        if (n > max_position_) throw std::out_of_range("wtt stream: horizon exceeded");
        auto k = sched_.k_mod3(n);
        if (!k) return 0;
        // Triple join of s0 with itself: position k = 3m + 2 reads s0(m).
        if (s0_.bit(*k / 3) == 0) return 0;
        return filler_.bit(n - sched_.lengths()[*k]);
    }

    nlohmann::json describe() const override {
        return {{"kind", "wtt"},
                {"filler", filler_.describe()},
                {"s0", s0_.describe()},
                {"use", g_.describe()},
                {"max_position", max_position_}};
    }

private:
    BitStream filler_, s0_;
    UseBound g_;
    std::uint64_t max_position_;
    WttSchedule sched_;
};

} // namespace

BitStream wtt_stream(BitStream filler, BitStream s0, UseBound g, std::uint64_t max_position) {
    return BitStream(std::make_shared<WttNode>(
        std::move(filler), std::move(s0), std::move(g), max_position));
}

} // namespace ttlab
