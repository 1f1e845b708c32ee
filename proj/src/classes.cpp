#include "ttlab/classes.hpp"

#include <deque>
#include <set>

namespace ttlab {

std::string ReductionClass::name() const {
    switch (tag) {
        case Tag::One: return "one";
        case Tag::ManyOne: return "many_one";
        case Tag::Conjunctive: return "conjunctive";
        case Tag::Disjunctive: return "disjunctive";
        case Tag::Positive: return "positive";
        case Tag::Linear: return "linear";
        case Tag::Btt: return "btt(" + std::to_string(bound) + ")";
        case Tag::BttAny: return "btt_any";
        case Tag::TT: return "tt";
    }
    throw std::logic_error("reduction class: bad tag");
}

ReductionClass ReductionClass::from_name(const std::string& name) {
    if (name == "one") return one();
    if (name == "many_one") return many_one();
    if (name == "conjunctive") return conjunctive();
    if (name == "disjunctive") return disjunctive();
    if (name == "positive") return positive();
    if (name == "linear") return linear();
    if (name == "btt_any") return btt_any();
    if (name == "tt") return tt();
    if (name.size() > 5 && name.rfind("btt(", 0) == 0 && name.back() == ')') {
        std::uint64_t c = 0;
        for (std::size_t i = 4; i + 1 < name.size(); ++i) {
            char ch = name[i];
            if (ch < '0' || ch > '9')
                throw std::invalid_argument("reduction class: bad bound in '" + name + "'");
            c = c * 10 + static_cast<std::uint64_t>(ch - '0');
        }
        return btt(c);
    }
    throw std::invalid_argument("reduction class: unknown name '" + name + "'");
}

namespace {

// Nodes for the reachability search: non-btt classes carry bound 0, btt(c)
// carries its bound capped so the chain btt(c) -> btt(c+1) terminates.
struct NodeKey {
    ReductionClass::Tag tag;
    std::uint64_t bound;
    bool operator<(const NodeKey& o) const {
        if (tag != o.tag) return tag < o.tag;
        return bound < o.bound;
    }
};

} // namespace

bool lattice_le(const ReductionClass& a, const ReductionClass& b) {
    using Tag = ReductionClass::Tag;
    if (a.tag == b.tag && (a.tag != Tag::Btt)) return true;
    if (a.tag == Tag::Btt && b.tag == Tag::Btt) return a.bound <= b.bound;

    const std::uint64_t cap = (b.tag == Tag::Btt ? b.bound : 0) + 2;
    std::set<NodeKey> seen;
    std::deque<NodeKey> work;
    auto push = [&](Tag t, std::uint64_t c) {
        NodeKey k{t, t == Tag::Btt ? std::min(c, cap) : 0};
        if (seen.insert(k).second) work.push_back(k);
    };
    push(a.tag, a.bound);
    while (!work.empty()) {
        NodeKey k = work.front();
        work.pop_front();
        if (k.tag == b.tag && (b.tag != Tag::Btt || k.bound <= b.bound)) return true;
        switch (k.tag) {
            case Tag::One:
                push(Tag::ManyOne, 0);
                break;
            case Tag::ManyOne:
                push(Tag::Conjunctive, 0);
                push(Tag::Disjunctive, 0);
                push(Tag::Btt, 1);
                break;
            case Tag::Conjunctive:
            case Tag::Disjunctive:
                push(Tag::Positive, 0);
                break;
            case Tag::Positive:
            case Tag::Linear:
            case Tag::BttAny:
                push(Tag::TT, 0);
                break;
            case Tag::Btt:
                if (k.bound == 1) push(Tag::Linear, 0);
                if (k.bound < cap) push(Tag::Btt, k.bound + 1);
                push(Tag::BttAny, 0);
                break;
            case Tag::TT:
                break;
        }
    }
    return false;
}

namespace {

bool all_atomic(const std::vector<Formula>& children) {
    for (const auto& c : children) {
        auto k = c.kind();
        if (k != Formula::Kind::Var && k != Formula::Kind::Const) return false;
    }
    return true;
}

bool is_positive_tree(const Formula& f) {
    switch (f.kind()) {
        case Formula::Kind::Var:
        case Formula::Kind::Const: return true;
        case Formula::Kind::And:
        case Formula::Kind::Or:
            for (const auto& c : f.children())
                if (!is_positive_tree(c)) return false;
            return true;
        default: return false;
    }
}

} // namespace

FormulaClasses classify(const Formula& f) {
    FormulaClasses out;
    out.btt_arity = f.variables().size();
    auto k = f.kind();
    bool atomic = (k == Formula::Kind::Var || k == Formula::Kind::Const);
    out.many_one = atomic;
    out.conjunctive = atomic || (k == Formula::Kind::And && all_atomic(f.children()));
    out.disjunctive = atomic || (k == Formula::Kind::Or && all_atomic(f.children()));
    out.linear = atomic || (k == Formula::Kind::Xor && all_atomic(f.children()));
    out.positive = is_positive_tree(f);
    return out;
}

} // namespace ttlab
