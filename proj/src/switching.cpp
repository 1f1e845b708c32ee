#include "ttlab/switching.hpp"

#include <algorithm>
#include <memory>
#include <stdexcept>

#include "ttlab/pairing.hpp"

namespace ttlab {

std::uint64_t switch_pi(std::uint64_t k, std::uint64_t alpha) {
    if (alpha == 0) return pairing::decode(k).first;
    return k % alpha;
}

nlohmann::json SwitchTrace::to_json() const {
    nlohmann::json ev = nlohmann::json::array();
    for (const auto& e : events)
        ev.push_back({{"stage", e.stage},
                      {"old_column", e.old_column},
                      {"new_column", e.new_column},
                      {"pointer", e.pointer},
                      {"deficiency_floor", e.deficiency_floor}});
    return {{"alpha", alpha},
            {"horizon", horizon},
            {"events", ev},
            {"final", {{"pointer", final_pointer},
                       {"deficiency_floor", final_floor},
                       {"column", final_column}}}};
}

SwitchTrace SwitchTrace::from_json(const nlohmann::json& j) {
    SwitchTrace t;
    t.alpha = j.at("alpha").get<std::uint64_t>();
    t.horizon = j.at("horizon").get<std::uint64_t>();
    for (const auto& e : j.at("events")) {
        SwitchEvent ev;
        ev.stage = e.at("stage").get<std::uint64_t>();
        ev.old_column = e.at("old_column").get<std::uint64_t>();
        ev.new_column = e.at("new_column").get<std::uint64_t>();
        ev.pointer = e.at("pointer").get<std::uint64_t>();
        ev.deficiency_floor = e.at("deficiency_floor").get<std::uint64_t>();
        t.events.push_back(ev);
    }
    const auto& f = j.at("final");
    t.final_pointer = f.at("pointer").get<std::uint64_t>();
    t.final_floor = f.at("deficiency_floor").get<std::uint64_t>();
    t.final_column = f.at("column").get<std::uint64_t>();
    return t;
}

namespace {

struct Machine {
    const StreamFamily& columns;
    std::uint64_t alpha;
    const ComplexityEstimator& e;
    std::uint64_t horizon;
    bool incremental;

    SwitchingResult run() const {
        SwitchingResult res;
        res.trace.alpha = alpha;
        res.trace.horizon = horizon;
        res.output.resize(horizon + 1);

        std::uint64_t n = 0, c = 0;
        std::uint64_t col = switch_pi(n, alpha);
        auto estimates = e.prefix_estimates(columns.at(col), horizon + 1);
        auto breaks = estimates->stage_breakpoints();

        // max over m <= scanned of (m - estimate(m, stage)), signed.
        std::int64_t best = INT64_MIN;
        auto rescan = [&](std::uint64_t upto_m, std::uint64_t stage) {
            best = INT64_MIN;
            for (std::uint64_t m = 0; m <= upto_m; ++m) {
                std::int64_t d = static_cast<std::int64_t>(m) -
                                 static_cast<std::int64_t>(estimates->at(m, stage));
                best = std::max(best, d);
            }
        };

        for (std::uint64_t s = 0; s <= horizon; ++s) {
            res.output[s] = static_cast<std::uint8_t>(columns.at(col).bit(s));
            if (s == horizon) break;

            std::uint64_t stage = s + 1;
            if (incremental) {
                bool at_break = std::find(breaks.begin(), breaks.end(), stage) != breaks.end();
                if (at_break || best == INT64_MIN) {
                    rescan(stage, stage);
                } else {
                    std::int64_t d = static_cast<std::int64_t>(stage) -
                                     static_cast<std::int64_t>(estimates->at(stage, stage));
                    best = std::max(best, d);
                }
            } else {
                rescan(stage, stage);
            }

            if (best > static_cast<std::int64_t>(c)) {
                std::uint64_t old_col = col;
                ++n;
                ++c;
                col = switch_pi(n, alpha);
                res.trace.events.push_back({stage, old_col, col, n, c});
                if (col != old_col) {
                    estimates = e.prefix_estimates(columns.at(col), horizon + 1);
                    breaks = estimates->stage_breakpoints();
                }
                best = INT64_MIN; // force rescan against the new tracked column
            }
        }

        res.trace.final_pointer = n;
        res.trace.final_floor = c;
        res.trace.final_column = col;
        return res;
    }
};

} // namespace

SwitchingResult switching_reduction(const StreamFamily& columns, std::uint64_t alpha,
                                    const ComplexityEstimator& e, std::uint64_t horizon) {
    return Machine{columns, alpha, e, horizon, true}.run();
}

SwitchingResult switching_reduction_naive(const StreamFamily& columns, std::uint64_t alpha,
                                          const ComplexityEstimator& e, std::uint64_t horizon) {
    return Machine{columns, alpha, e, horizon, false}.run();
}

TraceCheck verify_switch_trace(const StreamFamily& columns, std::uint64_t alpha,
                               const ComplexityEstimator& e, std::uint64_t horizon,
                               const SwitchTrace& trace,
                               const std::vector<std::uint8_t>& output) {
    auto recomputed = switching_reduction_naive(columns, alpha, e, horizon);

    if (recomputed.trace.events.size() != trace.events.size())
        return {false, "event count mismatch"};
    for (std::size_t i = 0; i < trace.events.size(); ++i) {
        const auto& a = recomputed.trace.events[i];
        const auto& b = trace.events[i];
        if (a.stage != b.stage || a.old_column != b.old_column || a.new_column != b.new_column ||
            a.pointer != b.pointer || a.deficiency_floor != b.deficiency_floor)
            return {false, "event " + std::to_string(i) + " mismatch"};
    }
    if (recomputed.trace.final_pointer != trace.final_pointer ||
        recomputed.trace.final_floor != trace.final_floor ||
        recomputed.trace.final_column != trace.final_column)
        return {false, "final state mismatch"};
    if (recomputed.output != output) return {false, "output bits mismatch"};

    // Suffix agreement: past the last event the output tracks one column.
    std::uint64_t from = trace.events.empty() ? 0 : trace.events.back().stage;
    BitStream tracked = columns.at(trace.final_column);
    for (std::uint64_t s = from; s <= horizon; ++s)
        if (output[s] != static_cast<std::uint8_t>(tracked.bit(s)))
            return {false, "suffix disagrees with tracked column at stage " + std::to_string(s)};
    return {true, ""};
}

} // namespace ttlab
