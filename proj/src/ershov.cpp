#include "ttlab/ershov.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace ttlab {

Delta2Approx Delta2Approx::from_table(std::vector<std::vector<Bit>> table) {
    if (table.empty() || table[0].empty())
        throw std::invalid_argument("approximation: empty table");
    for (const auto& row : table)
        if (row.size() != table[0].size())
            throw std::invalid_argument("approximation: ragged table");
    Delta2Approx a;
    a.stage_horizon_ = table[0].size() - 1;
    a.table_ = std::move(table);
    return a;
}

Delta2Approx Delta2Approx::from_rule(const std::function<Bit(std::uint64_t, std::uint64_t)>& f,
                                     std::uint64_t x_count, std::uint64_t stage_horizon) {
    if (x_count == 0) throw std::invalid_argument("approximation: empty domain");
    std::vector<std::vector<Bit>> table(x_count, std::vector<Bit>(stage_horizon + 1));
    for (std::uint64_t x = 0; x < x_count; ++x)
        for (std::uint64_t s = 0; s <= stage_horizon; ++s) table[x][s] = f(x, s) ? 1 : 0;
    return from_table(std::move(table));
}

Delta2Approx Delta2Approx::join_over_self_from_removals(
    const std::vector<std::optional<std::uint64_t>>& removal_stage, std::uint64_t stage_horizon) {
    std::uint64_t width = removal_stage.size();
    if (width == 0) throw std::invalid_argument("approximation: empty removal table");
    auto in_c = [&](std::uint64_t q, std::uint64_t s) {
        return !removal_stage[q].has_value() || *removal_stage[q] > s;
    };
    std::vector<std::vector<Bit>> table(width, std::vector<Bit>(stage_horizon + 1, 0));
    for (std::uint64_t s = 0; s <= stage_horizon; ++s) {
        for (std::uint64_t x = 0; x < width; ++x) {
            if (!in_c(x, s)) continue;
            std::uint64_t rank = 0;
            for (std::uint64_t q = 0; q < x; ++q)
                if (in_c(q, s)) ++rank;
            // rank <= x < width, so the inner lookup stays on the table.
            table[x][s] = in_c(rank, s) ? 1 : 0;
        }
    }
    return from_table(std::move(table));
}

Bit Delta2Approx::at(std::uint64_t x, std::uint64_t s) const {
    if (x >= table_.size()) throw std::out_of_range("approximation: x out of range");
    if (s > stage_horizon_) throw std::out_of_range("approximation: stage out of range");
    return table_[x][s];
}

std::string Delta2Approx::to_csv() const {
    std::ostringstream out;
    out << "x,s,bit\n";
    for (std::uint64_t x = 0; x < table_.size(); ++x)
        for (std::uint64_t s = 0; s <= stage_horizon_; ++s)
            out << x << ',' << s << ',' << int(table_[x][s]) << '\n';
    return out.str();
}

Delta2Approx Delta2Approx::from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::map<std::uint64_t, std::map<std::uint64_t, Bit>> cells;
    std::uint64_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        if (line_no == 1 && line.rfind("x,", 0) == 0) continue; // header
        std::istringstream ls(line);
        std::string xs, ss, bs;
        if (!std::getline(ls, xs, ',') || !std::getline(ls, ss, ',') || !std::getline(ls, bs))
            throw std::invalid_argument("approximation csv: bad line " + std::to_string(line_no));
        std::uint64_t x = std::stoull(xs), s = std::stoull(ss);
        int b = std::stoi(bs);
        if (b != 0 && b != 1)
            throw std::invalid_argument("approximation csv: bit must be 0 or 1 on line " +
                                        std::to_string(line_no));
        cells[x][s] = static_cast<Bit>(b);
    }
    if (cells.empty()) throw std::invalid_argument("approximation csv: no data");
    std::uint64_t x_count = cells.rbegin()->first + 1;
    std::uint64_t stages = 0;
    for (const auto& [x, row] : cells) stages = std::max(stages, row.rbegin()->first + 1);
    std::vector<std::vector<Bit>> table(x_count, std::vector<Bit>(stages));
    for (std::uint64_t x = 0; x < x_count; ++x) {
        auto it = cells.find(x);
        if (it == cells.end() || it->second.size() != stages)
            throw std::invalid_argument("approximation csv: incomplete grid at x = " +
                                        std::to_string(x));
        for (std::uint64_t s = 0; s < stages; ++s) {
            auto cell = it->second.find(s);
            if (cell == it->second.end())
                throw std::invalid_argument("approximation csv: missing stage " +
                                            std::to_string(s) + " at x = " + std::to_string(x));
            table[x][s] = cell->second;
        }
    }
    return from_table(std::move(table));
}

std::uint64_t mind_changes(const Delta2Approx& a, std::uint64_t x, std::uint64_t upto_stage) {
    if (upto_stage > a.stage_horizon())
        throw std::out_of_range("mind changes: stage beyond horizon");
    std::uint64_t count = 0;
    for (std::uint64_t s = 0; s < upto_stage; ++s)
        if (a.at(x, s) != a.at(x, s + 1)) ++count;
    return count;
}

nlohmann::json CeLevelReport::to_json() const {
    nlohmann::json j = {{"x_lo", x_lo},
                        {"x_hi", x_hi},
                        {"upto_stage", upto_stage},
                        {"counts", counts},
                        {"max_count", max_count},
                        {"start_violations", start_violations},
                        {"note", "verdicts are horizon-relative"}};
    if (n_ce_level) j["consistent_with_n_ce"] = *n_ce_level;
    if (has_bound) j["omega_ce_consistent_under_bound"] = omega_consistent;
    return j;
}

CeLevelReport classify_ce_level(const Delta2Approx& a, std::uint64_t x_lo, std::uint64_t x_hi,
                                std::uint64_t upto_stage, const std::optional<UseBound>& g) {
    if (x_lo >= x_hi || x_hi > a.x_count())
        throw std::invalid_argument("classify: bad x range");
    CeLevelReport rep;
    rep.x_lo = x_lo;
    rep.x_hi = x_hi;
    rep.upto_stage = upto_stage;
    rep.has_bound = g.has_value();
    rep.omega_consistent = g.has_value();
    for (std::uint64_t x = x_lo; x < x_hi; ++x) {
        std::uint64_t c = mind_changes(a, x, upto_stage);
        rep.counts.push_back(c);
        rep.max_count = std::max(rep.max_count, c);
        if (a.at(x, 0) != 0) rep.start_violations.push_back(x);
        if (g && c > g->bound(x)) rep.omega_consistent = false;
    }
    if (rep.start_violations.empty()) rep.n_ce_level = rep.max_count;
    return rep;
}

namespace {

// First stage s <= upto at which |{t < s : f(x,t) != f(x,t+1)}| reaches the
// threshold.
std::optional<std::uint64_t> entry_stage(const Delta2Approx& a, std::uint64_t x,
                                         std::uint64_t upto, std::uint64_t threshold) {
    if (threshold == 0) return 0;
    std::uint64_t count = 0;
    for (std::uint64_t s = 0; s < upto; ++s) {
        if (a.at(x, s) != a.at(x, s + 1)) {
            ++count;
            if (count >= threshold) return s + 1;
        }
    }
    return std::nullopt;
}

void require_zero_start(const Delta2Approx& a, const char* who) {
    for (std::uint64_t x = 0; x < a.x_count(); ++x)
        if (a.at(x, 0) != 0)
            throw std::invalid_argument(std::string(who) +
                                        ": approximation must start at 0 (x = " +
                                        std::to_string(x) + ")");
}

} // namespace

std::vector<std::uint64_t> StageSetFamily::reconstruction(std::uint64_t s) const {
    std::vector<std::uint64_t> out;
    for (std::uint64_t x = 0; x < x_count; ++x) {
        for (std::uint64_t i = 0; i < k; ++i) {
            if (in_a(i, x, s) && !in_b(i, x, s)) {
                out.push_back(x);
                break;
            }
        }
    }
    return out;
}

bool StageSetFamily::nesting_ok() const {
    for (std::uint64_t s = 0; s <= upto_stage; ++s) {
        for (std::uint64_t x = 0; x < x_count; ++x) {
            for (std::uint64_t i = 0; i < k; ++i) {
                if (in_b(i, x, s) && !in_a(i, x, s)) return false;
                if (i + 1 < k && in_a(i + 1, x, s) && !in_b(i, x, s)) return false;
            }
        }
    }
    return true;
}

nlohmann::json StageSetFamily::to_json() const {
    auto chain = [&](const std::vector<std::vector<std::optional<std::uint64_t>>>& e) {
        nlohmann::json out = nlohmann::json::array();
        for (const auto& level : e) {
            nlohmann::json entries = nlohmann::json::array();
            for (std::uint64_t x = 0; x < level.size(); ++x)
                if (level[x]) entries.push_back({{"x", x}, {"stage", *level[x]}});
            out.push_back(entries);
        }
        return out;
    };
    return {{"k", k},
            {"x_count", x_count},
            {"upto_stage", upto_stage},
            {"a_chain", chain(a_entry)},
            {"b_chain", chain(b_entry)},
            {"reconstruction", reconstruction(upto_stage)}};
}

StageSetFamily decompose_even(const Delta2Approx& a, std::uint64_t k, std::uint64_t upto_stage) {
    if (k == 0) throw std::invalid_argument("even decomposition: k must be positive");
    require_zero_start(a, "even decomposition");
    StageSetFamily fam;
    fam.k = k;
    fam.x_count = a.x_count();
    fam.upto_stage = upto_stage;
    for (std::uint64_t x = 0; x < a.x_count(); ++x) {
        std::uint64_t c = mind_changes(a, x, upto_stage);
        if (c > 2 * k)
            throw std::invalid_argument("even decomposition: mind-change count " +
                                        std::to_string(c) + " exceeds 2k at x = " +
                                        std::to_string(x));
    }
    fam.a_entry.resize(k);
    fam.b_entry.resize(k);
    for (std::uint64_t i = 0; i < k; ++i) {
        fam.a_entry[i].resize(a.x_count());
        fam.b_entry[i].resize(a.x_count());
        for (std::uint64_t x = 0; x < a.x_count(); ++x) {
            fam.a_entry[i][x] = entry_stage(a, x, upto_stage, 2 * i + 1);
            fam.b_entry[i][x] = entry_stage(a, x, upto_stage, 2 * i + 2);
        }
    }
    return fam;
}

nlohmann::json OddDecomposition::to_json() const {
    nlohmann::json ce = nlohmann::json::array();
    for (const auto& [x, s] : ce_entries) ce.push_back({{"x", x}, {"stage", s}});
    return {{"k", k},
            {"x_count", x_count},
            {"upto_stage", upto_stage},
            {"bounded_part", even_xs},
            {"bounded_part_limit", even_limit},
            {"ce_part", ce},
            {"union_reconstruction", union_reconstruction()}};
}

std::vector<std::uint64_t> OddDecomposition::union_reconstruction() const {
    std::set<std::uint64_t> out(even_limit.begin(), even_limit.end());
    for (const auto& [x, s] : ce_entries) out.insert(x);
    return {out.begin(), out.end()};
}

OddDecomposition decompose_odd(const Delta2Approx& a, std::uint64_t k, std::uint64_t upto_stage) {
    require_zero_start(a, "odd decomposition");
    OddDecomposition dec;
    dec.k = k;
    dec.x_count = a.x_count();
    dec.upto_stage = upto_stage;
    for (std::uint64_t x = 0; x < a.x_count(); ++x) {
        std::uint64_t c = mind_changes(a, x, upto_stage);
        if (c > 2 * k + 1)
            throw std::invalid_argument("odd decomposition: mind-change count " +
                                        std::to_string(c) + " exceeds 2k+1 at x = " +
                                        std::to_string(x));
        if (c == 2 * k + 1) {
            auto s = entry_stage(a, x, upto_stage, 2 * k + 1);
            dec.ce_entries.emplace_back(x, *s);
        } else {
            dec.even_xs.push_back(x);
            if (a.at(x, upto_stage) == 1) dec.even_limit.push_back(x);
        }
    }
    return dec;
}

} // namespace ttlab
