#include "ttlab/reduction.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace ttlab {

// --- UseBound ---------------------------------------------------------------

UseBound UseBound::affine(std::uint64_t a, std::uint64_t b) {
    UseBound u;
    u.is_affine_ = true;
    u.a_ = a;
    u.b_ = b;
    return u;
}

UseBound UseBound::table(std::vector<std::uint64_t> values) {
    if (values.empty()) throw std::invalid_argument("use bound: empty table");
    UseBound u;
    u.is_affine_ = false;
    u.values_ = std::move(values);
    u.running_max_.reserve(u.values_.size());
    std::uint64_t m = 0;
    for (auto v : u.values_) {
        m = std::max(m, v);
        u.running_max_.push_back(m);
    }
    return u;
}

std::uint64_t UseBound::bound(std::uint64_t n) const {
    if (is_affine_) {
        if (a_ != 0 && n > (UINT64_MAX - b_) / a_) throw std::overflow_error("use bound: overflow");
        return a_ * n + b_;
    }
    if (n >= values_.size()) throw std::out_of_range("use bound: horizon exceeded");
    return values_[n];
}

std::uint64_t UseBound::monotone(std::uint64_t n) const {
    if (is_affine_) return bound(n); // affine bounds with a >= 0 are monotone
    if (n >= running_max_.size()) throw std::out_of_range("use bound: horizon exceeded");
    return running_max_[n];
}

nlohmann::json UseBound::describe() const {
    if (is_affine_) return {{"kind", "affine"}, {"a", a_}, {"b", b_}};
    return {{"kind", "table"}, {"values", values_}};
}

UseBound UseBound::from_json(const nlohmann::json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "affine") return affine(j.at("a").get<std::uint64_t>(), j.at("b").get<std::uint64_t>());
    if (kind == "table") return table(j.at("values").get<std::vector<std::uint64_t>>());
    throw std::invalid_argument("use bound json: unknown kind '" + kind + "'");
}

// --- RowTemplate ------------------------------------------------------------

struct RowTemplate::Node {
    Kind kind;
    std::uint64_t a = 0, b = 0; // Var: position(n) = a*n + b
    Bit value = 0;
    std::vector<RowTemplate> children;
};

RowTemplate RowTemplate::var(std::uint64_t a, std::uint64_t b) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Var;
    n->a = a;
    n->b = b;
    return RowTemplate(std::move(n));
}

RowTemplate RowTemplate::constant(Bit value) {
    if (value != 0 && value != 1) throw std::invalid_argument("row template: bit must be 0 or 1");
    auto n = std::make_shared<Node>();
    n->kind = Kind::Const;
    n->value = value;
    return RowTemplate(std::move(n));
}

RowTemplate RowTemplate::negate(RowTemplate child) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Not;
    n->children.push_back(std::move(child));
    return RowTemplate(std::move(n));
}

RowTemplate RowTemplate::conj(std::vector<RowTemplate> children) {
    if (children.empty()) throw std::invalid_argument("row template: connective needs children");
    if (children.size() == 1) return children[0];
    auto n = std::make_shared<Node>();
    n->kind = Kind::And;
    n->children = std::move(children);
    return RowTemplate(std::move(n));
}

RowTemplate RowTemplate::disj(std::vector<RowTemplate> children) {
    if (children.empty()) throw std::invalid_argument("row template: connective needs children");
    if (children.size() == 1) return children[0];
    auto n = std::make_shared<Node>();
    n->kind = Kind::Or;
    n->children = std::move(children);
    return RowTemplate(std::move(n));
}

RowTemplate RowTemplate::parity(std::vector<RowTemplate> children) {
    if (children.empty()) throw std::invalid_argument("row template: connective needs children");
    if (children.size() == 1) return children[0];
    auto n = std::make_shared<Node>();
    n->kind = Kind::Xor;
    n->children = std::move(children);
    return RowTemplate(std::move(n));
}

Formula RowTemplate::instantiate(std::uint64_t n) const {
    if (!node_) throw std::logic_error("row template: empty handle");
    switch (node_->kind) {
        case Kind::Var: {
            if (node_->a != 0 && n > (UINT64_MAX - node_->b) / node_->a)
                throw std::overflow_error("row template: position overflow");
            return Formula::var(node_->a * n + node_->b);
        }
        case Kind::Const: return Formula::constant(node_->value);
        case Kind::Not: return Formula::negate(node_->children[0].instantiate(n));
        case Kind::And:
        case Kind::Or:
        case Kind::Xor: {
            std::vector<Formula> cs;
            cs.reserve(node_->children.size());
            for (const auto& c : node_->children) cs.push_back(c.instantiate(n));
            if (node_->kind == Kind::And) return Formula::conj(std::move(cs));
            if (node_->kind == Kind::Or) return Formula::disj(std::move(cs));
            return Formula::parity(std::move(cs));
        }
    }
    throw std::logic_error("row template: bad kind");
}

nlohmann::json RowTemplate::to_json() const {
    if (!node_) throw std::logic_error("row template: empty handle");
    switch (node_->kind) {
        case Kind::Var: return {{"node", "var"}, {"a", node_->a}, {"b", node_->b}};
        case Kind::Const: return {{"node", "const"}, {"value", node_->value}};
        case Kind::Not: return {{"node", "not"}, {"child", node_->children[0].to_json()}};
        default: {
            const char* name = node_->kind == Kind::And ? "and"
                             : node_->kind == Kind::Or  ? "or"
                                                        : "xor";
            nlohmann::json cs = nlohmann::json::array();
            for (const auto& c : node_->children) cs.push_back(c.to_json());
            return {{"node", name}, {"children", cs}};
        }
    }
}

RowTemplate RowTemplate::from_json(const nlohmann::json& j) {
    const std::string node = j.at("node").get<std::string>();
    if (node == "var") return var(j.at("a").get<std::uint64_t>(), j.at("b").get<std::uint64_t>());
    if (node == "const") return constant(j.at("value").get<Bit>());
    if (node == "not") return negate(from_json(j.at("child")));
    std::vector<RowTemplate> cs;
    for (const auto& c : j.at("children")) cs.push_back(from_json(c));
    if (node == "and") return conj(std::move(cs));
    if (node == "or") return disj(std::move(cs));
    if (node == "xor") return parity(std::move(cs));
    throw std::invalid_argument("row template json: unknown node tag '" + node + "'");
}

// --- TTReduction ------------------------------------------------------------

TTReduction TTReduction::from_rules(std::vector<RowTemplate> rules, ReductionClass declared,
                                    std::optional<std::uint64_t> horizon) {
    if (rules.empty()) throw std::invalid_argument("reduction: needs at least one rule");
    TTReduction r;
    r.ruled_ = true;
    r.rules_ = std::move(rules);
    r.declared_ = declared;
    r.horizon_ = horizon;
    return r;
}

TTReduction TTReduction::from_table(std::vector<Formula> rows, ReductionClass declared) {
    if (rows.empty()) throw std::invalid_argument("reduction: empty table");
    TTReduction r;
    r.ruled_ = false;
    r.table_ = std::move(rows);
    r.declared_ = declared;
    r.horizon_ = r.table_.size();
    return r;
}

Formula TTReduction::row(std::uint64_t n) const {
    if (horizon_ && n >= *horizon_) throw std::out_of_range("reduction: horizon exceeded");
    if (ruled_) return rules_[n % rules_.size()].instantiate(n);
    return table_[n];
}

std::vector<std::uint64_t> TTReduction::query_set(std::uint64_t n) const {
    return row(n).variables();
}

nlohmann::json TTReduction::to_json() const {
    nlohmann::json j;
    j["class"] = declared_.name();
    if (horizon_) j["horizon"] = *horizon_;
    if (ruled_) {
        j["kind"] = "rule";
        nlohmann::json rules = nlohmann::json::array();
        for (const auto& r : rules_) rules.push_back(r.to_json());
        j["rules"] = rules;
    } else {
        j["kind"] = "table";
        nlohmann::json rows = nlohmann::json::array();
        for (const auto& f : table_) rows.push_back(f.to_string());
        j["rows"] = rows;
    }
    return j;
}

TTReduction TTReduction::from_json(const nlohmann::json& j) {
    ReductionClass declared = ReductionClass::from_name(j.at("class").get<std::string>());
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "rule") {
        std::vector<RowTemplate> rules;
        for (const auto& r : j.at("rules")) rules.push_back(RowTemplate::from_json(r));
        std::optional<std::uint64_t> horizon;
        if (j.contains("horizon") && !j.at("horizon").is_null())
            horizon = j.at("horizon").get<std::uint64_t>();
        return from_rules(std::move(rules), declared, horizon);
    }
    if (kind == "table") {
        std::vector<Formula> rows;
        for (const auto& r : j.at("rows")) rows.push_back(parse_formula(r.get<std::string>()));
        return from_table(std::move(rows), declared);
    }
    throw std::invalid_argument("reduction json: unknown kind '" + kind + "'");
}

std::string TTReduction::to_csv() const {
    if (ruled_) throw std::logic_error("reduction: only explicit tables serialize to CSV");
    std::string out = "n,formula\n";
    for (std::size_t n = 0; n < table_.size(); ++n) {
        out += std::to_string(n);
        out += ',';
        out += table_[n].to_string();
        out += '\n';
    }
    return out;
}

TTReduction TTReduction::from_csv(const std::string& text, ReductionClass declared) {
    std::istringstream in(text);
    std::string line;
    std::vector<std::pair<std::uint64_t, Formula>> rows;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (first && line == "n,formula") {
            first = false;
            continue;
        }
        first = false;
        auto comma = line.find(',');
        if (comma == std::string::npos)
            throw std::invalid_argument("reduction csv: missing comma in '" + line + "'");
        std::uint64_t n = std::stoull(line.substr(0, comma));
        rows.emplace_back(n, parse_formula(line.substr(comma + 1)));
    }
    if (rows.empty()) throw std::invalid_argument("reduction csv: no rows");
    std::sort(rows.begin(), rows.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<Formula> table;
    table.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].first != i)
            throw std::invalid_argument("reduction csv: row indices must be 0..k without gaps");
        table.push_back(rows[i].second);
    }
    return from_table(std::move(table), declared);
}

// --- apply ------------------------------------------------------------------

namespace {

class ReducedNode final : public StreamNode {
public:
    ReducedNode(TTReduction reduction, BitStream oracle)
        : reduction_(std::move(reduction)), oracle_(std::move(oracle)) {}
    Bit bit(std::uint64_t n) const override { return reduction_.row(n).evaluate(oracle_); }
    nlohmann::json describe() const override {
        return {{"kind", "reduced"},
                {"reduction", reduction_.to_json()},
                {"oracle", oracle_.describe()}};
    }

private:
    TTReduction reduction_;
    BitStream oracle_;
};

} // namespace

BitStream apply(TTReduction reduction, BitStream oracle) {
    return BitStream(std::make_shared<ReducedNode>(std::move(reduction), std::move(oracle)));
}

// --- audits -----------------------------------------------------------------

WttAudit check_wtt(const TTReduction& r, const UseBound& u, std::uint64_t upto) {
    WttAudit audit;
    for (std::uint64_t n = 0; n <= upto; ++n) {
        auto qs = r.query_set(n);
        if (qs.empty()) continue;
        if (qs.back() > u.bound(n)) {
            audit.ok = false;
            audit.first_violation = n;
            return audit;
        }
    }
    return audit;
}

ClassAudit verify_class(const TTReduction& r, std::uint64_t upto) {
    ClassAudit audit;
    const ReductionClass& declared = r.declared_class();
    std::set<std::uint64_t> seen_positions;
    for (std::uint64_t n = 0; n <= upto; ++n) {
        Formula f = r.row(n);
        if (!classify(f).member_of(declared)) {
            audit.ok = false;
            audit.first_violation = n;
            return audit;
        }
        if (declared.tag == ReductionClass::Tag::One) {
            // One-reductions: every row is a bare variable and the map
            // n |-> position is injective.
            if (f.kind() != Formula::Kind::Var || !seen_positions.insert(f.position()).second) {
                audit.ok = false;
                audit.first_violation = n;
                return audit;
            }
        }
    }
    return audit;
}

} // namespace ttlab
