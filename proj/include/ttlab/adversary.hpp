#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "ttlab/bitstream.hpp"
#include "ttlab/reduction.hpp"

namespace ttlab {

struct AdversaryOptions {
    // "Infinitely many" at finite horizon: a branch counts as reached when it
    // yields at least this many witness rows.
    std::uint64_t threshold = 32;
    std::uint64_t seed = 0x5EED0F5EED0F5EEDull;
};

// Constructed counterexample oracle for a declared-class reduction: applying
// the reduction to the oracle yields forced_value at every witness row, so
// the output is constant on an explicit computable set (not bi-immune).
struct AdversaryResult {
    enum class Status { Witness, Inconclusive };

    Status status = Status::Inconclusive;
    std::string reason; // inconclusive only
    std::string kind;   // construction branch tag
    BitStream oracle;   // valid iff status == Witness
    std::vector<std::uint64_t> witness;
    Bit forced_value = 0;
    nlohmann::json details;

    nlohmann::json to_json() const;
};

// Case split on the CNF rows: either enough rows have every clause touching
// one parity (those rows are forced to 1 by saturating that parity), or
// enough rows have a clause entirely inside one parity (forced to 0 by
// zeroing it). Throws if the reduction fails its positive-class audit.
AdversaryResult adversary_positive(const TTReduction& r, std::uint64_t horizon,
                                   const AdversaryOptions& opt = {});

// Staged construction over parity rows: starting from zeros on the chosen
// parity and pseudorandom bits on the other, each targeted row owns a fresh
// bit of the chosen parity occurring an odd number of times in the row;
// flipping it when the row currently evaluates 0 forces the row to 1, and
// freshness keeps later flips from disturbing earlier rows. Throws if the
// reduction fails its linear-class audit, or with "no fresh-bit rows found
// below horizon" when no parity yields enough targetable rows.
AdversaryResult adversary_linear(const TTReduction& r, std::uint64_t horizon,
                                 const AdversaryOptions& opt = {});

// Recursion on the norm bound: greedily collect rows with pairwise disjoint
// query sets; with enough of them, either control rows through their even
// bits (emitting the larger constant-value subset) or force uncontrollable
// rows to 1 through their odd bits. If the greedy scan stalls, hard-code the
// collected positions to 0, recurse on the bound reduced by one, and lift
// the witness by clearing those positions in the returned oracle. Throws if
// the reduction fails its btt(bound) audit.
AdversaryResult adversary_btt(const TTReduction& r, std::uint64_t bound, std::uint64_t horizon,
                              const AdversaryOptions& opt = {});

struct WitnessCheck {
    bool ok = false;
    std::string reason;
    std::uint64_t checked = 0;
};

// Re-evaluates the reduction on the constructed oracle at every witness row;
// passes iff all reproduce the forced value and there are at least
// min_positions of them.
WitnessCheck verify_witness(const TTReduction& r, const AdversaryResult& res,
                            std::uint64_t min_positions = 32);

} // namespace ttlab
