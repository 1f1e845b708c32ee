#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "ttlab/bitstream.hpp"
#include "ttlab/estimator.hpp"
#include "ttlab/index_set.hpp"
#include "ttlab/rational.hpp"

namespace ttlab {

struct ProfilePoint {
    std::uint64_t n = 0;
    std::uint64_t estimate = 0;
    Rational ratio; // estimate / n
};

// Finite-horizon dimension estimates. All four values are exact rationals
// over the ratio profile estimate(prefix(n))/n, n = 1..horizon, with the
// estimator run at its final stage (stage = horizon).
//
// The supplied family is augmented with the tails {m..horizon} for
// 1 <= m <= tail_cap, where tail_cap = min(horizon/2, least last-usable-point
// over the family members). Capping the tails there keeps every member
// reaching past every tail start, which is what makes the ordering chain
//   hausdorff <= {cp, inescapable} <= packing
// an exact theorem of the finite data rather than an asymptotic hope.
struct DimensionReport {
    std::uint64_t horizon = 0;
    std::uint64_t tail_cap = 0;
    Rational hausdorff_hat, packing_hat, cp_hat, inescapable_hat;
    std::vector<ProfilePoint> profile;        // n = 1..horizon
    std::vector<std::size_t> skipped_members; // family indices with no usable point

    bool chain_holds() const {
        return hausdorff_hat <= cp_hat && cp_hat <= packing_hat &&
               hausdorff_hat <= inescapable_hat && inescapable_hat <= packing_hat;
    }

    std::string profile_csv() const; // header "n,estimate,ratio"
    nlohmann::json summary() const;
};

// family may be empty; usable member points are the elements in [1, horizon]
// (a prefix of length 0 has no ratio). Members with no usable point are
// skipped and recorded in the report.
DimensionReport dimension_profile(const ComplexityEstimator& e, const BitStream& s,
                                  std::uint64_t horizon, const std::vector<IndexSet>& family);

// Contrast between segment classes of a segment stream: the ratio profile is
// sampled at each segment's right endpoint (prefix length min(s(k+1), horizon)),
// segments split into filler (indicator bit 1) and zero (bit 0) classes, and
// the earliest endpoint of each class is dropped as start-up noise. gap =
// filler mean - zero mean and may be negative.
struct SegmentContrastReport {
    std::uint64_t horizon = 0;
    std::vector<ProfilePoint> filler_endpoints, zero_endpoints;
    Rational filler_mean, zero_mean, gap;
    bool conclusive = false; // both classes nonempty after the drop

    nlohmann::json summary() const;
};

SegmentContrastReport segment_contrast(const ComplexityEstimator& e, const BitStream& stream,
                                       const BitStream& indicator, std::uint64_t horizon);

} // namespace ttlab
