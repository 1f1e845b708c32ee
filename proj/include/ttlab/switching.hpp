#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "ttlab/bitstream.hpp"
#include "ttlab/estimator.hpp"

namespace ttlab {

// Column pointer map: for finite alpha, pi(k) = k mod alpha; for alpha = 0
// (standing for an unbounded column supply) pi(k) is the first coordinate of
// the Cantor decode of k. Both give every column index an infinite preimage.
std::uint64_t switch_pi(std::uint64_t k, std::uint64_t alpha);

struct SwitchEvent {
    std::uint64_t stage = 0;      // the stage s+1 at which the trigger fired
    std::uint64_t old_column = 0; // pi(n) before the advance
    std::uint64_t new_column = 0; // pi(n+1); may equal old_column
    std::uint64_t pointer = 0;    // n after the advance
    std::uint64_t deficiency_floor = 0; // c after the advance
};

struct SwitchTrace {
    std::uint64_t alpha = 0; // 0 = unbounded
    std::uint64_t horizon = 0;
    std::vector<SwitchEvent> events;
    std::uint64_t final_pointer = 0;
    std::uint64_t final_floor = 0;
    std::uint64_t final_column = 0;

    nlohmann::json to_json() const;
    static SwitchTrace from_json(const nlohmann::json& j);
};

struct SwitchingResult {
    std::vector<std::uint8_t> output; // bits for stages 0..horizon
    SwitchTrace trace;
};

// Stage machine: at stage s the output bit is columns(pi(n_s))(s). Moving to
// stage s+1, the tracked column A = columns(pi(n_s)) is tested for
//     exists m <= s+1 : estimate(A restricted to m, stage s+1) < m - c_s
// and when that fires both n and c advance by one (c_0 = n_0 = 0). Estimates
// are non-increasing in stage, so between stage breakpoints the test only
// needs the new prefix length m = s+1; full rescans happen at breakpoints and
// after a switch.
SwitchingResult switching_reduction(const StreamFamily& columns, std::uint64_t alpha,
                                    const ComplexityEstimator& e, std::uint64_t horizon);

// Literal restatement of the machine: rescans every m <= s+1 at every stage.
// Quadratic; used to cross-check the incremental machine and to re-verify
// emitted traces.
SwitchingResult switching_reduction_naive(const StreamFamily& columns, std::uint64_t alpha,
                                          const ComplexityEstimator& e, std::uint64_t horizon);

struct TraceCheck {
    bool ok = false;
    std::string reason;
};

// Recomputes the machine from its inputs and compares events, final state and
// output bits; also checks the suffix-agreement property (output equals the
// finally tracked column bitwise after the last event).
TraceCheck verify_switch_trace(const StreamFamily& columns, std::uint64_t alpha,
                               const ComplexityEstimator& e, std::uint64_t horizon,
                               const SwitchTrace& trace,
                               const std::vector<std::uint8_t>& output);

} // namespace ttlab
