#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ttlab/bitstream.hpp"
#include "ttlab/reduction.hpp"

namespace ttlab {

// A stagewise 0/1 approximation f(x, s), stored as a full table over
// x < x_count and stages 0..stage_horizon. Immutable once built.
class Delta2Approx {
public:
    // table[x][s]; rows must be nonempty and of equal length.
    static Delta2Approx from_table(std::vector<std::vector<Bit>> table);
    static Delta2Approx from_rule(const std::function<Bit(std::uint64_t, std::uint64_t)>& f,
                                  std::uint64_t x_count, std::uint64_t stage_horizon);

    // Join of a co-c.e. set over itself against the empty set, as a stage
    // table: every number starts present, x leaves for good at removal[x]
    // (never, when unset), and position x at stage s holds
    //     C_s(x) * C_s(|{q < x : q in C_s}|),
    // i.e. the x-th bit of C joined over C with the empty set. The repeated
    // rank shifts are what drive the unbounded mind-change counts.
    static Delta2Approx join_over_self_from_removals(
        const std::vector<std::optional<std::uint64_t>>& removal_stage,
        std::uint64_t stage_horizon);

    Bit at(std::uint64_t x, std::uint64_t s) const;
    std::uint64_t x_count() const { return static_cast<std::uint64_t>(table_.size()); }
    std::uint64_t stage_horizon() const { return stage_horizon_; }

    std::string to_csv() const; // header "x,s,bit", one line per cell
    static Delta2Approx from_csv(const std::string& text);

private:
    std::vector<std::vector<Bit>> table_;
    std::uint64_t stage_horizon_ = 0;
};

// |{s < upto_stage : f(x,s) != f(x,s+1)}|. upto_stage may equal the stage
// horizon; the last pair read is (upto_stage-1, upto_stage).
std::uint64_t mind_changes(const Delta2Approx& a, std::uint64_t x, std::uint64_t upto_stage);

struct CeLevelReport {
    std::uint64_t x_lo = 0, x_hi = 0, upto_stage = 0;
    std::vector<std::uint64_t> counts; // per x in [x_lo, x_hi)
    std::uint64_t max_count = 0;
    std::vector<std::uint64_t> start_violations; // x with f(x,0) != 0
    std::optional<std::uint64_t> n_ce_level;     // max_count, absent on violations
    bool has_bound = false;
    bool omega_consistent = false; // counts[x] <= g(x) at every probed x

    nlohmann::json to_json() const;
};

// Horizon-relative verdicts only: a count can always grow past the horizon.
CeLevelReport classify_ce_level(const Delta2Approx& a, std::uint64_t x_lo, std::uint64_t x_hi,
                                std::uint64_t upto_stage,
                                const std::optional<UseBound>& g = std::nullopt);

// Nested difference family: A_i = {x : count >= 2i+1}, B_i = {x : count >= 2i+2}
// for i < k, each with the first stage the threshold is met.
struct StageSetFamily {
    std::uint64_t k = 0, x_count = 0, upto_stage = 0;
    std::vector<std::vector<std::optional<std::uint64_t>>> a_entry, b_entry; // [i][x]

    bool in_a(std::uint64_t i, std::uint64_t x, std::uint64_t s) const {
        return a_entry[i][x].has_value() && *a_entry[i][x] <= s;
    }
    bool in_b(std::uint64_t i, std::uint64_t x, std::uint64_t s) const {
        return b_entry[i][x].has_value() && *b_entry[i][x] <= s;
    }

    // Union over i of (A_i - B_i) as of stage s, sorted.
    std::vector<std::uint64_t> reconstruction(std::uint64_t s) const;

    // A_0 >= B_0 >= A_1 >= ... as sets, at every stage <= upto_stage.
    bool nesting_ok() const;

    nlohmann::json to_json() const;
};

// Requires f(x,0) = 0 everywhere and mind-change counts <= 2k; throws
// otherwise. reconstruction(upto_stage) then equals {x : f(x,upto_stage)=1}.
StageSetFamily decompose_even(const Delta2Approx& a, std::uint64_t k, std::uint64_t upto_stage);

// Split at bound 2k+1: the rows that stay within 2k changes, plus a
// c.e.-style entry list of the rows using all 2k+1 (those are in the limit
// set for good once the last change lands).
struct OddDecomposition {
    std::uint64_t k = 0, x_count = 0, upto_stage = 0;
    std::vector<std::uint64_t> even_xs;                             // count <= 2k
    std::vector<std::pair<std::uint64_t, std::uint64_t>> ce_entries; // (x, stage of change 2k+1)
    std::vector<std::uint64_t> even_limit; // {x in even_xs : f(x, upto_stage) = 1}

    std::vector<std::uint64_t> union_reconstruction() const; // sorted

    nlohmann::json to_json() const;
};

// Requires f(x,0) = 0 everywhere and counts <= 2k+1; throws otherwise.
OddDecomposition decompose_odd(const Delta2Approx& a, std::uint64_t k, std::uint64_t upto_stage);

} // namespace ttlab
