#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ttlab/formula.hpp"

namespace ttlab {

// Named reduction classes, ordered by the classical inclusion diagram:
//
//   one -> many_one -> {conjunctive, disjunctive, btt(1)}
//   conjunctive -> positive, disjunctive -> positive, positive -> tt
//   btt(1) -> linear -> tt
//   btt(c) -> btt(c') for c <= c', btt(c) -> btt_any -> tt
//
struct ReductionClass {
    enum class Tag { One, ManyOne, Conjunctive, Disjunctive, Positive, Linear, Btt, BttAny, TT };

    Tag tag = Tag::TT;
    std::uint64_t bound = 0; // Btt only

    static ReductionClass one() { return {Tag::One, 0}; }
    static ReductionClass many_one() { return {Tag::ManyOne, 0}; }
    static ReductionClass conjunctive() { return {Tag::Conjunctive, 0}; }
    static ReductionClass disjunctive() { return {Tag::Disjunctive, 0}; }
    static ReductionClass positive() { return {Tag::Positive, 0}; }
    static ReductionClass linear() { return {Tag::Linear, 0}; }
    static ReductionClass btt(std::uint64_t c) { return {Tag::Btt, c}; }
    static ReductionClass btt_any() { return {Tag::BttAny, 0}; }
    static ReductionClass tt() { return {Tag::TT, 0}; }

    bool operator==(const ReductionClass& o) const {
        return tag == o.tag && (tag != Tag::Btt || bound == o.bound);
    }

    std::string name() const;
    static ReductionClass from_name(const std::string& name);
};

// Inclusion of reduction classes: true when every reduction of class a is a
// reduction of class b. Reflexive and transitive.
bool lattice_le(const ReductionClass& a, const ReductionClass& b);

// Structural class memberships of one truth-table row. The btt arity is the
// exact count of distinct variables; membership in btt(c) means arity <= c.
struct FormulaClasses {
    bool many_one = false;
    bool conjunctive = false;
    bool disjunctive = false;
    bool positive = false;
    bool linear = false;
    std::uint64_t btt_arity = 0;

    bool member_of(const ReductionClass& c) const {
        switch (c.tag) {
            case ReductionClass::Tag::One:
            case ReductionClass::Tag::ManyOne: return many_one;
            case ReductionClass::Tag::Conjunctive: return conjunctive;
            case ReductionClass::Tag::Disjunctive: return disjunctive;
            case ReductionClass::Tag::Positive: return positive;
            case ReductionClass::Tag::Linear: return linear;
            case ReductionClass::Tag::Btt: return btt_arity <= c.bound;
            case ReductionClass::Tag::BttAny:
            case ReductionClass::Tag::TT: return true;
        }
        return false;
    }

    // Memberships as a list: the named classes that hold, the exact-arity
    // btt class, and tt.
    std::vector<ReductionClass> as_list() const {
        std::vector<ReductionClass> out;
        if (many_one) out.push_back(ReductionClass::many_one());
        if (conjunctive) out.push_back(ReductionClass::conjunctive());
        if (disjunctive) out.push_back(ReductionClass::disjunctive());
        if (positive) out.push_back(ReductionClass::positive());
        if (linear) out.push_back(ReductionClass::linear());
        out.push_back(ReductionClass::btt(btt_arity));
        out.push_back(ReductionClass::tt());
        return out;
    }
};

FormulaClasses classify(const Formula& f);

} // namespace ttlab
