#include "ttlab/adversary.hpp"

#include <array>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>

#include "ttlab/classes.hpp"

namespace ttlab {

namespace {

void require_audit(const TTReduction& r, const ReductionClass& need, std::uint64_t horizon,
                   const std::string& who) {
    if (!lattice_le(r.declared_class(), need))
        throw std::invalid_argument(who + ": declared class " + r.declared_class().name() +
                                    " is not within " + need.name());
    auto audit = verify_class(r, horizon);
    if (!audit.ok)
        throw std::invalid_argument(who + ": class audit fails at row " +
                                    std::to_string(*audit.first_violation));
}

} // namespace

nlohmann::json AdversaryResult::to_json() const {
    nlohmann::json j = {{"status", status == Status::Witness ? "witness" : "inconclusive"},
                        {"kind", kind}};
    if (status == Status::Witness) {
        j["oracle"] = oracle.describe();
        j["witness"] = witness;
        j["forced_value"] = forced_value;
    } else {
        j["reason"] = reason;
    }
    if (!details.is_null()) j["details"] = details;
    return j;
}

AdversaryResult adversary_positive(const TTReduction& r, std::uint64_t horizon,
                                   const AdversaryOptions& opt) {
    require_audit(r, ReductionClass::positive(), horizon, "adversary positive");

    // Candidate attacks in preference order. A row with no clauses (constant
    // 1) qualifies for both saturation attacks vacuously; an empty clause
    // (constant 0) qualifies for both blocking attacks vacuously.
    //   0: every clause touches an even variable -> ones on evens, forced 1
    //   1: every clause touches an odd variable  -> ones on odds, forced 1
    //   2: some clause entirely on odds          -> zeros on odds, forced 0
    //   3: some clause entirely on evens         -> zeros on evens, forced 0
    std::array<std::vector<std::uint64_t>, 4> hits;
    for (std::uint64_t n = 0; n <= horizon; ++n) {
        auto clauses = cnf_clauses(to_cnf(r.row(n)));
        bool touch_even = true, touch_odd = true, block_odd = false, block_even = false;
        for (const auto& cl : clauses) {
            bool has_even = false, has_odd = false;
            for (std::uint64_t q : cl) (q % 2 == 0 ? has_even : has_odd) = true;
            if (!has_even) {
                touch_even = false;
                block_odd = true; // clause confined to odd positions (or empty)
            }
            if (!has_odd) {
                touch_odd = false;
                block_even = true;
            }
        }
        if (touch_even) hits[0].push_back(n);
        if (touch_odd) hits[1].push_back(n);
        if (block_odd) hits[2].push_back(n);
        if (block_even) hits[3].push_back(n);
    }

    AdversaryResult res;
    res.details = {{"counts",
                    {hits[0].size(), hits[1].size(), hits[2].size(), hits[3].size()}},
                   {"threshold", opt.threshold}};
    int pick = -1;
    for (int i = 0; i < 4; ++i) {
        if (hits[i].size() >= opt.threshold) {
            pick = i;
            break;
        }
    }
    if (pick < 0) {
        res.reason = "inconclusive at horizon: no case reached the witness threshold";
        res.kind = "positive_none";
        return res;
    }

    BitStream ones = BitStream::constant(1);
    BitStream zeros = BitStream::constant(0);
    BitStream rnd = BitStream::prng(opt.seed);
    static const char* kinds[4] = {"positive_touch_even", "positive_touch_odd",
                                   "positive_block_odd", "positive_block_even"};
    switch (pick) {
        case 0: res.oracle = join(ones, rnd); res.forced_value = 1; break;
        case 1: res.oracle = join(rnd, ones); res.forced_value = 1; break;
        case 2: res.oracle = join(rnd, zeros); res.forced_value = 0; break;
        default: res.oracle = join(zeros, rnd); res.forced_value = 0; break;
    }
    res.status = AdversaryResult::Status::Witness;
    res.kind = kinds[pick];
    res.witness = hits[pick];
    res.details["case"] = pick < 2 ? 1 : 2;
    res.details["parity"] = (pick == 0 || pick == 3) ? "even" : "odd";
    return res;
}

namespace {

// Positions with odd occurrence count among a parity-sum row's leaves; bits
// read an even number of times cancel and cannot move the row's value.
std::vector<std::uint64_t> odd_multiplicity_positions(const Formula& f) {
    std::map<std::uint64_t, std::uint64_t> mult;
    std::function<void(const Formula&)> walk = [&](const Formula& g) {
        switch (g.kind()) {
            case Formula::Kind::Var: ++mult[g.position()]; break;
            case Formula::Kind::Const: break;
            case Formula::Kind::Not: walk(g.child()); break;
            default:
                for (const auto& ch : g.children()) walk(ch);
        }
    };
    walk(f);
    std::vector<std::uint64_t> out;
    for (const auto& [q, m] : mult)
        if (m % 2 == 1) out.push_back(q);
    return out; // sorted: map iteration order
}

} // namespace

AdversaryResult adversary_linear(const TTReduction& r, std::uint64_t horizon,
                                 const AdversaryOptions& opt) {
    require_audit(r, ReductionClass::linear(), horizon, "adversary linear");

    // A row is targetable for parity p if it reads a bit of parity p, with
    // odd multiplicity, that no earlier row has read at all. Flipping that
    // bit flips the row; freshness keeps later flips away from earlier rows.
    std::uint64_t parity = 0;
    std::vector<std::pair<std::uint64_t, std::uint64_t>> targets; // (row, fresh bit)
    for (parity = 0; parity < 2; ++parity) {
        targets.clear();
        std::set<std::uint64_t> used;
        for (std::uint64_t n = 0; n <= horizon; ++n) {
            for (std::uint64_t q : odd_multiplicity_positions(r.row(n))) {
                if (q % 2 == parity && used.find(q) == used.end()) {
                    targets.emplace_back(n, q);
                    break;
                }
            }
            auto qs = r.query_set(n);
            used.insert(qs.begin(), qs.end());
        }
        if (targets.size() >= opt.threshold) break;
    }
    if (parity == 2) throw std::runtime_error("no fresh-bit rows found below horizon");

    BitStream zeros = BitStream::constant(0);
    BitStream rnd = BitStream::prng(opt.seed);
    BitStream base = parity == 0 ? join(zeros, rnd) : join(rnd, zeros);

    // Stages in row order: flip the row's designated bit whenever the row
    // currently evaluates to 0. The designated bit starts 0 (it lies on the
    // zeroed parity), so a flip always writes 1.
    std::map<std::uint64_t, Bit> over;
    auto cur = [&](std::uint64_t q) -> Bit {
        auto it = over.find(q);
        return it != over.end() ? it->second : base.bit(q);
    };
    nlohmann::json stage_log = nlohmann::json::array();
    for (const auto& [n, v] : targets) {
        Bit val = r.row(n).evaluate(cur);
        if (val == 0) over[v] = 1;
        stage_log.push_back({{"row", n}, {"bit", v}, {"flipped", val == 0}});
    }

    std::vector<std::pair<std::uint64_t, Bit>> flips(over.begin(), over.end());
    AdversaryResult res;
    res.status = AdversaryResult::Status::Witness;
    res.kind = "linear_flip";
    res.oracle = overlay(base, flips);
    res.forced_value = 1;
    for (const auto& [n, v] : targets) res.witness.push_back(n);
    res.details = {{"parity", parity == 0 ? "even" : "odd"},
                   {"stages", stage_log},
                   {"flip_count", flips.size()},
                   {"threshold", opt.threshold}};
    return res;
}

namespace {

Formula substitute_zero(const Formula& f, const std::set<std::uint64_t>& h) {
    switch (f.kind()) {
        case Formula::Kind::Var:
            return h.count(f.position()) ? Formula::constant(0) : f;
        case Formula::Kind::Const:
            return f;
        case Formula::Kind::Not:
            return Formula::negate(substitute_zero(f.child(), h));
        default: {
            std::vector<Formula> kids;
            kids.reserve(f.children().size());
            for (const auto& ch : f.children()) kids.push_back(substitute_zero(ch, h));
            if (f.kind() == Formula::Kind::And) return Formula::conj(std::move(kids));
            if (f.kind() == Formula::Kind::Or) return Formula::disj(std::move(kids));
            return Formula::parity(std::move(kids));
        }
    }
}

struct BttRowPlan {
    std::uint64_t n = 0;
    std::vector<std::uint64_t> evens, odds;
    bool controllable = false;
    std::uint64_t sigma = 0; // assignment mask over evens
    Bit value = 0;           // controlled value
};

Bit eval_masked(const Formula& f, const std::vector<std::uint64_t>& evens, std::uint64_t emask,
                const std::vector<std::uint64_t>& odds, std::uint64_t omask) {
    return f.evaluate([&](std::uint64_t q) -> Bit {
        for (std::size_t i = 0; i < evens.size(); ++i)
            if (evens[i] == q) return static_cast<Bit>((emask >> i) & 1);
        for (std::size_t i = 0; i < odds.size(); ++i)
            if (odds[i] == q) return static_cast<Bit>((omask >> i) & 1);
        return 0; // unreachable: every variable is in one of the two lists
    });
}

AdversaryResult btt_recursive(const std::function<Formula(std::uint64_t)>& row_of,
                              std::uint64_t bound, std::uint64_t horizon,
                              const AdversaryOptions& opt, nlohmann::json& levels) {
    // Greedy pass: accept rows whose query sets avoid everything accepted so
    // far. Scanning the whole horizon before judging makes the stall decision
    // total below the horizon.
    std::set<std::uint64_t> used;
    std::vector<std::uint64_t> accepted;
    for (std::uint64_t n = 0; n <= horizon; ++n) {
        auto vars = row_of(n).variables();
        bool disjoint = true;
        for (std::uint64_t q : vars)
            if (used.count(q)) {
                disjoint = false;
                break;
            }
        if (disjoint) {
            accepted.push_back(n);
            used.insert(vars.begin(), vars.end());
        }
    }
    levels.push_back({{"bound", bound},
                      {"accepted", accepted.size()},
                      {"query_positions", used.size()}});

    if (accepted.size() < opt.threshold) {
        // Stall: every row past the accepted ones meets the collected
        // positions, so pinning them to 0 lowers every row's arity.
        if (bound == 0) {
            AdversaryResult res;
            res.kind = "btt_stall";
            res.reason = "inconclusive at horizon: greedy stalled with bound 0";
            return res;
        }
        std::set<std::uint64_t> h = used;
        levels.back()["hardcoded"] = std::vector<std::uint64_t>(h.begin(), h.end());
        auto sub = [&row_of, h](std::uint64_t n) { return substitute_zero(row_of(n), h); };
        AdversaryResult inner = btt_recursive(sub, bound - 1, horizon, opt, levels);
        if (inner.status == AdversaryResult::Status::Witness) {
            std::vector<std::pair<std::uint64_t, Bit>> clear;
            clear.reserve(h.size());
            for (std::uint64_t q : h) clear.emplace_back(q, 0);
            inner.oracle = overlay(inner.oracle, clear);
        }
        return inner;
    }

    // Control phase: per accepted row, search the even-bit assignments (the
    // all-zeros one first) for one pinning the row's value regardless of its
    // odd bits.
    std::vector<BttRowPlan> plans;
    plans.reserve(accepted.size());
    for (std::uint64_t n : accepted) {
        BttRowPlan plan;
        plan.n = n;
        Formula f = row_of(n);
        for (std::uint64_t q : f.variables())
            (q % 2 == 0 ? plan.evens : plan.odds).push_back(q);
        std::uint64_t ecount = std::uint64_t{1} << plan.evens.size();
        std::uint64_t ocount = std::uint64_t{1} << plan.odds.size();
        for (std::uint64_t emask = 0; emask < ecount && !plan.controllable; ++emask) {
            Bit first = eval_masked(f, plan.evens, emask, plan.odds, 0);
            bool constant = true;
            for (std::uint64_t omask = 1; omask < ocount; ++omask) {
                if (eval_masked(f, plan.evens, emask, plan.odds, omask) != first) {
                    constant = false;
                    break;
                }
            }
            if (constant) {
                plan.controllable = true;
                plan.sigma = emask;
                plan.value = first;
            }
        }
        plans.push_back(std::move(plan));
    }

    std::vector<const BttRowPlan*> value0, value1, uncontrolled;
    for (const auto& p : plans) {
        if (!p.controllable) uncontrolled.push_back(&p);
        else (p.value == 0 ? value0 : value1).push_back(&p);
    }

    BitStream base = join(BitStream::constant(0), BitStream::prng(opt.seed));
    const auto& larger = value0.size() >= value1.size() ? value0 : value1;

    if (larger.size() >= opt.threshold) {
        // Pin every controllable row's even bits; emit the larger constant
        // side. Disjointness makes the pins conflict-free.
        std::vector<std::pair<std::uint64_t, Bit>> pins;
        nlohmann::json controls = nlohmann::json::array();
        for (const auto& p : plans) {
            if (!p.controllable) continue;
            for (std::size_t i = 0; i < p.evens.size(); ++i)
                pins.emplace_back(p.evens[i], static_cast<Bit>((p.sigma >> i) & 1));
            controls.push_back({{"row", p.n}, {"evens", p.evens},
                                {"sigma", p.sigma}, {"value", p.value}});
        }
        AdversaryResult res;
        res.status = AdversaryResult::Status::Witness;
        res.kind = "btt_control";
        res.oracle = overlay(base, pins);
        res.forced_value = &larger == &value0 ? 0 : 1;
        for (const auto* p : larger) res.witness.push_back(p->n);
        res.details = {{"controls", controls},
                       {"value0", value0.size()},
                       {"value1", value1.size()},
                       {"threshold", opt.threshold}};
        return res;
    }

    if (uncontrolled.size() >= opt.threshold) {
        // No even assignment pins these rows, so with evens at zero both row
        // values are reachable through the odd bits; pick odd assignments
        // forcing 1.
        std::vector<std::pair<std::uint64_t, Bit>> pins;
        nlohmann::json forcing = nlohmann::json::array();
        AdversaryResult res;
        for (const auto* p : uncontrolled) {
            Formula f = row_of(p->n);
            std::uint64_t ocount = std::uint64_t{1} << p->odds.size();
            bool found = false;
            for (std::uint64_t omask = 0; omask < ocount; ++omask) {
                if (eval_masked(f, p->evens, 0, p->odds, omask) == 1) {
                    for (std::size_t i = 0; i < p->odds.size(); ++i)
                        pins.emplace_back(p->odds[i], static_cast<Bit>((omask >> i) & 1));
                    forcing.push_back({{"row", p->n}, {"odds", p->odds}, {"omask", omask}});
                    found = true;
                    break;
                }
            }
            if (!found) {
                res.kind = "btt_odd_forcing";
                res.reason = "internal: uncontrollable row admits no forcing assignment";
                return res;
            }
            res.witness.push_back(p->n);
        }
        res.status = AdversaryResult::Status::Witness;
        res.kind = "btt_odd_forcing";
        res.oracle = overlay(base, pins);
        res.forced_value = 1;
        res.details = {{"forcing", forcing}, {"threshold", opt.threshold}};
        return res;
    }

    AdversaryResult res;
    res.kind = "btt_split";
    res.reason = "inconclusive at horizon: neither control nor odd-forcing reached the threshold";
    res.details = {{"value0", value0.size()},
                   {"value1", value1.size()},
                   {"uncontrolled", uncontrolled.size()},
                   {"threshold", opt.threshold}};
    return res;
}

} // namespace

AdversaryResult adversary_btt(const TTReduction& r, std::uint64_t bound, std::uint64_t horizon,
                              const AdversaryOptions& opt) {
    require_audit(r, ReductionClass::btt(bound), horizon, "adversary btt");
    nlohmann::json levels = nlohmann::json::array();
    AdversaryResult res =
        btt_recursive([&r](std::uint64_t n) { return r.row(n); }, bound, horizon, opt, levels);
    if (res.details.is_null()) res.details = nlohmann::json::object();
    res.details["levels"] = levels;
    return res;
}

WitnessCheck verify_witness(const TTReduction& r, const AdversaryResult& res,
                            std::uint64_t min_positions) {
    if (res.status != AdversaryResult::Status::Witness)
        return {false, "result carries no witness", 0};
    std::uint64_t checked = 0;
    for (std::uint64_t n : res.witness) {
        if (r.row(n).evaluate(res.oracle) != res.forced_value)
            return {false, "forced value not reproduced at row " + std::to_string(n), checked};
        ++checked;
    }
    if (checked < min_positions)
        return {false,
                "witness has " + std::to_string(checked) + " positions, needs " +
                    std::to_string(min_positions),
                checked};
    return {true, "", checked};
}

} // namespace ttlab
