#include "ttlab/dimensions.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "ttlab/segments.hpp"

namespace ttlab {

namespace {

nlohmann::json rational_json(const Rational& r) {
    return {{"fraction", r.to_fraction_string()}, {"decimal", r.to_decimal(6)}};
}

Rational mean_ratio(const std::vector<ProfilePoint>& pts) {
    Rational acc(0, 1);
    for (const auto& p : pts) acc = acc + p.ratio;
    return acc.div(static_cast<std::int64_t>(pts.size()));
}

} // namespace

std::string DimensionReport::profile_csv() const {
    std::ostringstream out;
    out << "n,estimate,ratio\n";
    for (const auto& p : profile)
        out << p.n << ',' << p.estimate << ',' << p.ratio.to_decimal(6) << '\n';
    return out.str();
}

nlohmann::json DimensionReport::summary() const {
    return {{"horizon", horizon},
            {"tail_cap", tail_cap},
            {"hausdorff", rational_json(hausdorff_hat)},
            {"packing", rational_json(packing_hat)},
            {"complex_packing", rational_json(cp_hat)},
            {"inescapable", rational_json(inescapable_hat)},
            {"chain_holds", chain_holds()},
            {"skipped_members", skipped_members}};
}

DimensionReport dimension_profile(const ComplexityEstimator& e, const BitStream& s,
                                  std::uint64_t horizon, const std::vector<IndexSet>& family) {
    if (horizon < 2) throw std::invalid_argument("dimension profile: horizon must be >= 2");

    DimensionReport rep;
    rep.horizon = horizon;

    auto estimates = e.prefix_profile(s, horizon, /*stage=*/horizon); // n = 1..horizon
    rep.profile.resize(horizon);
    for (std::uint64_t n = 1; n <= horizon; ++n) {
        rep.profile[n - 1] = {n, estimates[n - 1], Rational::of(estimates[n - 1], n)};
    }
    auto ratio = [&](std::uint64_t n) { return rep.profile[n - 1].ratio; };

    // suffix_min[m] / suffix_max[m] over n in [m, horizon], 1-based.
    std::vector<Rational> suffix_min(horizon + 2), suffix_max(horizon + 2);
    suffix_min[horizon] = suffix_max[horizon] = ratio(horizon);
    for (std::uint64_t m = horizon - 1; m >= 1; --m) {
        suffix_min[m] = std::min(suffix_min[m + 1], ratio(m));
        suffix_max[m] = std::max(suffix_max[m + 1], ratio(m));
        if (m == 1) break;
    }

    // Usable member points and the tail cap.
    std::uint64_t tail_cap = horizon / 2;
    std::vector<std::vector<std::uint64_t>> points(family.size());
    for (std::size_t i = 0; i < family.size(); ++i) {
        auto below = family[i].members_below(horizon + 1);
        for (std::uint64_t v : below)
            if (v >= 1) points[i].push_back(v);
        if (points[i].empty()) {
            rep.skipped_members.push_back(i);
            continue;
        }
        tail_cap = std::min(tail_cap, points[i].back());
    }
    if (tail_cap == 0) tail_cap = 1;
    rep.tail_cap = tail_cap;

    // Tails {m..horizon}, m <= tail_cap.
    Rational h = suffix_min[1], p = suffix_max[1];
    for (std::uint64_t m = 1; m <= tail_cap; ++m) {
        h = std::max(h, suffix_min[m]);
        p = std::min(p, suffix_max[m]);
    }
    rep.hausdorff_hat = h;
    rep.packing_hat = p;

    // Supplied members on top of the tails.
    Rational cp = h, ines = p;
    for (std::size_t i = 0; i < family.size(); ++i) {
        if (points[i].empty()) continue;
        Rational lo = ratio(points[i][0]), hi = lo;
        for (std::uint64_t v : points[i]) {
            lo = std::min(lo, ratio(v));
            hi = std::max(hi, ratio(v));
        }
        cp = std::max(cp, lo);
        ines = std::min(ines, hi);
    }
    rep.cp_hat = cp;
    rep.inescapable_hat = ines;
    return rep;
}

nlohmann::json SegmentContrastReport::summary() const {
    auto endpoints_json = [](const std::vector<ProfilePoint>& pts) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& p : pts)
            arr.push_back({{"n", p.n}, {"estimate", p.estimate},
                           {"ratio", p.ratio.to_decimal(6)}});
        return arr;
    };
    nlohmann::json j = {{"horizon", horizon},
                        {"conclusive", conclusive},
                        {"filler_endpoints", endpoints_json(filler_endpoints)},
                        {"zero_endpoints", endpoints_json(zero_endpoints)}};
    if (conclusive) {
        j["filler_mean"] = rational_json(filler_mean);
        j["zero_mean"] = rational_json(zero_mean);
        j["gap"] = rational_json(gap);
    }
    return j;
}

SegmentContrastReport segment_contrast(const ComplexityEstimator& e, const BitStream& stream,
                                       const BitStream& indicator, std::uint64_t horizon) {
    if (horizon < 2) throw std::invalid_argument("segment contrast: horizon must be >= 2");

    SegmentContrastReport rep;
    rep.horizon = horizon;

    auto pe = e.prefix_estimates(stream, horizon);
    auto point = [&](std::uint64_t n) {
        std::uint64_t est = pe->at(n, /*stage=*/horizon);
        return ProfilePoint{n, est, Rational::of(est, n)};
    };

    bool filler_seen = false, zero_seen = false;
    for (std::uint64_t k = 0; k < 8 && SegmentSchedule::s(k) < horizon; ++k) {
        std::uint64_t right = horizon;
        if (k + 1 < 8) right = std::min(SegmentSchedule::s(k + 1), horizon);
        bool filler = indicator.bit(k) == 1;
        // Drop the earliest endpoint of each class: the leading segments are
        // too short for the estimator to say anything about their content.
        if (filler) {
            if (filler_seen) rep.filler_endpoints.push_back(point(right));
            filler_seen = true;
        } else {
            if (zero_seen) rep.zero_endpoints.push_back(point(right));
            zero_seen = true;
        }
    }

    rep.conclusive = !rep.filler_endpoints.empty() && !rep.zero_endpoints.empty();
    if (rep.conclusive) {
        rep.filler_mean = mean_ratio(rep.filler_endpoints);
        rep.zero_mean = mean_ratio(rep.zero_endpoints);
        rep.gap = rep.filler_mean - rep.zero_mean;
    }
    return rep;
}

} // namespace ttlab
