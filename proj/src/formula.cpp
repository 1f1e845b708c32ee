#include "ttlab/formula.hpp"

#include <algorithm>
#include <cctype>

namespace ttlab {

struct Formula::Node {
    Kind kind;
    std::uint64_t position = 0;
    Bit value = 0;
    std::vector<Formula> children;
};

Formula Formula::var(std::uint64_t position) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Var;
    n->position = position;
    return Formula(std::move(n));
}

Formula Formula::constant(Bit b) {
    if (b != 0 && b != 1) throw std::invalid_argument("formula constant: bit must be 0 or 1");
    auto n = std::make_shared<Node>();
    n->kind = Kind::Const;
    n->value = b;
    return Formula(std::move(n));
}

Formula Formula::negate(Formula f) {
    if (!f.valid()) throw std::invalid_argument("formula: empty child");
    auto n = std::make_shared<Node>();
    n->kind = Kind::Not;
    n->children.push_back(std::move(f));
    return Formula(std::move(n));
}

namespace {
Formula build_nary(Formula::Kind kind, std::vector<Formula> children) {
    switch (kind) {
        case Formula::Kind::And: return Formula::conj(std::move(children));
        case Formula::Kind::Or: return Formula::disj(std::move(children));
        case Formula::Kind::Xor: return Formula::parity(std::move(children));
        default: throw std::logic_error("formula: not an n-ary connective");
    }
}
} // namespace

Formula Formula::conj(std::vector<Formula> children) {
    if (children.empty()) throw std::invalid_argument("formula: connective needs children");
    for (const auto& c : children)
        if (!c.valid()) throw std::invalid_argument("formula: empty child");
    if (children.size() == 1) return children[0];
    auto n = std::make_shared<Node>();
    n->kind = Kind::And;
    n->children = std::move(children);
    return Formula(std::move(n));
}

Formula Formula::disj(std::vector<Formula> children) {
    if (children.empty()) throw std::invalid_argument("formula: connective needs children");
    for (const auto& c : children)
        if (!c.valid()) throw std::invalid_argument("formula: empty child");
    if (children.size() == 1) return children[0];
    auto n = std::make_shared<Node>();
    n->kind = Kind::Or;
    n->children = std::move(children);
    return Formula(std::move(n));
}

Formula Formula::parity(std::vector<Formula> children) {
    if (children.empty()) throw std::invalid_argument("formula: connective needs children");
    for (const auto& c : children)
        if (!c.valid()) throw std::invalid_argument("formula: empty child");
    if (children.size() == 1) return children[0];
    auto n = std::make_shared<Node>();
    n->kind = Kind::Xor;
    n->children = std::move(children);
    return Formula(std::move(n));
}

Formula::Kind Formula::kind() const {
    if (!node_) throw std::logic_error("formula: empty handle");
    return node_->kind;
}

std::uint64_t Formula::position() const {
    if (kind() != Kind::Var) throw std::logic_error("formula: not a variable");
    return node_->position;
}

Bit Formula::value() const {
    if (kind() != Kind::Const) throw std::logic_error("formula: not a constant");
    return node_->value;
}

const Formula& Formula::child() const {
    if (kind() != Kind::Not) throw std::logic_error("formula: not a negation");
    return node_->children[0];
}

const std::vector<Formula>& Formula::children() const {
    Kind k = kind();
    if (k != Kind::And && k != Kind::Or && k != Kind::Xor)
        throw std::logic_error("formula: not an n-ary connective");
    return node_->children;
}

bool Formula::operator==(const Formula& other) const {
    if (node_ == other.node_) return true;
    if (!node_ || !other.node_) return false;
    if (node_->kind != other.node_->kind) return false;
    switch (node_->kind) {
        case Kind::Var: return node_->position == other.node_->position;
        case Kind::Const: return node_->value == other.node_->value;
        default: break;
    }
    if (node_->children.size() != other.node_->children.size()) return false;
    for (std::size_t i = 0; i < node_->children.size(); ++i)
        if (!(node_->children[i] == other.node_->children[i])) return false;
    return true;
}

namespace {
void collect_vars(const Formula& f, std::vector<std::uint64_t>& out) {
    switch (f.kind()) {
        case Formula::Kind::Var: out.push_back(f.position()); break;
        case Formula::Kind::Const: break;
        case Formula::Kind::Not: collect_vars(f.child(), out); break;
        default:
            for (const auto& c : f.children()) collect_vars(c, out);
    }
}
} // namespace

std::vector<std::uint64_t> Formula::variables() const {
    std::vector<std::uint64_t> out;
    collect_vars(*this, out);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

Bit Formula::evaluate(const std::function<Bit(std::uint64_t)>& oracle) const {
    switch (kind()) {
        case Kind::Var: return oracle(node_->position);
        case Kind::Const: return node_->value;
        case Kind::Not: return 1 - node_->children[0].evaluate(oracle);
        case Kind::And:
            for (const auto& c : node_->children)
                if (!c.evaluate(oracle)) return 0;
            return 1;
        case Kind::Or:
            for (const auto& c : node_->children)
                if (c.evaluate(oracle)) return 1;
            return 0;
        case Kind::Xor: {
            Bit acc = 0;
            for (const auto& c : node_->children) acc ^= c.evaluate(oracle);
            return acc;
        }
    }
    throw std::logic_error("formula: bad kind");
}

Bit Formula::evaluate(const BitStream& oracle) const {
    return evaluate([&](std::uint64_t p) { return oracle.bit(p); });
}

namespace {

bool is_atomic(const Formula& f) {
    auto k = f.kind();
    return k == Formula::Kind::Var || k == Formula::Kind::Const;
}

void print(const Formula& f, std::string& out) {
    switch (f.kind()) {
        case Formula::Kind::Var:
            out += 'v';
            out += std::to_string(f.position());
            return;
        case Formula::Kind::Const:
            out += f.value() ? '1' : '0';
            return;
        case Formula::Kind::Not:
            out += '!';
            if (is_atomic(f.child()) || f.child().kind() == Formula::Kind::Not) {
                print(f.child(), out);
            } else {
                out += '(';
                print(f.child(), out);
                out += ')';
            }
            return;
        default: {
            const char* op = f.kind() == Formula::Kind::And ? " & "
                           : f.kind() == Formula::Kind::Or  ? " | "
                                                            : " + ";
            bool first = true;
            for (const auto& c : f.children()) {
                if (!first) out += op;
                first = false;
                bool needs_parens = !is_atomic(c) && c.kind() != Formula::Kind::Not;
                if (needs_parens) out += '(';
                print(c, out);
                if (needs_parens) out += ')';
            }
            return;
        }
    }
}

} // namespace

std::string Formula::to_string() const {
    std::string out;
    print(*this, out);
    return out;
}

nlohmann::json Formula::to_json() const {
    switch (kind()) {
        case Kind::Var: return {{"node", "var"}, {"index", node_->position}};
        case Kind::Const: return {{"node", "const"}, {"value", node_->value}};
        case Kind::Not: return {{"node", "not"}, {"child", node_->children[0].to_json()}};
        default: {
            const char* name = kind() == Kind::And ? "and" : kind() == Kind::Or ? "or" : "xor";
            nlohmann::json cs = nlohmann::json::array();
            for (const auto& c : node_->children) cs.push_back(c.to_json());
            return {{"node", name}, {"children", cs}};
        }
    }
}

Formula Formula::from_json(const nlohmann::json& j) {
    const std::string node = j.at("node").get<std::string>();
    if (node == "var") return var(j.at("index").get<std::uint64_t>());
    if (node == "const") return constant(j.at("value").get<Bit>());
    if (node == "not") return negate(from_json(j.at("child")));
    std::vector<Formula> cs;
    for (const auto& c : j.at("children")) cs.push_back(from_json(c));
    if (cs.empty()) throw std::invalid_argument("formula json: connective needs children");
    if (node == "and") return cs.size() == 1 ? cs[0] : conj(std::move(cs));
    if (node == "or") return cs.size() == 1 ? cs[0] : disj(std::move(cs));
    if (node == "xor") return cs.size() == 1 ? cs[0] : parity(std::move(cs));
    throw std::invalid_argument("formula json: unknown node tag '" + node + "'");
}

// --- parser ---------------------------------------------------------------

namespace {

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    Formula run() {
        Formula f = parse_or();
        skip_space();
        if (pos_ != text_.size()) throw ParseError(pos_, "unexpected trailing input");
        return f;
    }

private:
    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Formula parse_or() {
        std::vector<Formula> parts{parse_xor()};
        while (eat('|')) parts.push_back(parse_xor());
        return build_nary(Formula::Kind::Or, std::move(parts));
    }

    Formula parse_xor() {
        std::vector<Formula> parts{parse_and()};
        while (eat('+')) parts.push_back(parse_and());
        return build_nary(Formula::Kind::Xor, std::move(parts));
    }

    Formula parse_and() {
        std::vector<Formula> parts{parse_unary()};
        while (eat('&')) parts.push_back(parse_unary());
        return build_nary(Formula::Kind::And, std::move(parts));
    }

    Formula parse_unary() {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == '!') {
            ++pos_;
            return Formula::negate(parse_unary());
        }
        return parse_atom();
    }

    Formula parse_atom() {
        skip_space();
        if (pos_ >= text_.size()) throw ParseError(pos_, "expected a term");
        char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            Formula f = parse_or();
            if (!eat(')')) throw ParseError(pos_, "expected ')'");
            return f;
        }
        if (c == '0' || c == '1') {
            ++pos_;
            return Formula::constant(c - '0');
        }
        if (c == 'v') {
            std::size_t start = pos_;
            ++pos_;
            std::uint64_t value = 0;
            bool any = false;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                value = value * 10 + static_cast<std::uint64_t>(text_[pos_] - '0');
                any = true;
                ++pos_;
            }
            if (!any) throw ParseError(start + 1, "expected digits after 'v'");
            return Formula::var(value);
        }
        throw ParseError(pos_, std::string("unexpected character '") + c + "'");
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

} // namespace

Formula parse_formula(std::string_view text) { return Parser(text).run(); }

// --- CNF ------------------------------------------------------------------

namespace {

// Clause = disjunction of variable positions. In a clause list, zero
// clauses means constant 1 and a single empty clause means constant 0.
using Clause = std::vector<std::uint64_t>;
using ClauseList = std::vector<Clause>;

ClauseList cnf_of(const Formula& f, std::size_t clause_cap);

ClauseList cnf_and(const std::vector<Formula>& children, std::size_t cap) {
    ClauseList all;
    for (const auto& c : children) {
        ClauseList part = cnf_of(c, cap);
        for (auto& cl : part) {
            if (cl.empty()) return {Clause{}};
            if (all.size() >= cap) throw std::runtime_error("cnf: clause cap exceeded");
            all.push_back(std::move(cl));
        }
    }
    return all;
}

ClauseList cnf_or(const std::vector<Formula>& children, std::size_t cap) {
    // Distribute: each clause of the result is a union of one clause per
    // child, in child-major order.
    ClauseList acc{Clause{}};
    for (const auto& c : children) {
        ClauseList part = cnf_of(c, cap);
        if (part.empty()) return {}; // child is const 1, so is the disjunction
        if (part.size() == 1 && part[0].empty()) continue; // child is const 0
        ClauseList next;
        for (const auto& left : acc) {
            for (const auto& right : part) {
                if (next.size() >= cap) throw std::runtime_error("cnf: clause cap exceeded");
                Clause merged = left;
                for (auto v : right)
                    if (std::find(merged.begin(), merged.end(), v) == merged.end())
                        merged.push_back(v);
                next.push_back(std::move(merged));
            }
        }
        acc = std::move(next);
    }
    return acc;
}

ClauseList cnf_of(const Formula& f, std::size_t cap) {
    switch (f.kind()) {
        case Formula::Kind::Var: return {Clause{f.position()}};
        case Formula::Kind::Const: return f.value() ? ClauseList{} : ClauseList{Clause{}};
        case Formula::Kind::And: return cnf_and(f.children(), cap);
        case Formula::Kind::Or: return cnf_or(f.children(), cap);
        default: throw std::invalid_argument("cnf: formula is not positive");
    }
}

Formula clause_to_formula(const Clause& cl) {
    if (cl.empty()) return Formula::constant(0);
    std::vector<Formula> lits;
    lits.reserve(cl.size());
    for (auto v : cl) lits.push_back(Formula::var(v));
    return Formula::disj(std::move(lits));
}

} // namespace

Formula to_cnf(const Formula& f, std::size_t clause_cap) {
    ClauseList clauses = cnf_of(f, clause_cap);
    if (clauses.empty()) return Formula::constant(1);
    if (clauses.size() == 1 && clauses[0].empty()) return Formula::constant(0);
    std::vector<Formula> parts;
    parts.reserve(clauses.size());
    for (const auto& cl : clauses) parts.push_back(clause_to_formula(cl));
    return Formula::conj(std::move(parts));
}

std::vector<std::vector<std::uint64_t>> cnf_clauses(const Formula& cnf) {
    ClauseList out;
    auto clause_of = [](const Formula& g) -> Clause {
        if (g.kind() == Formula::Kind::Var) return {g.position()};
        if (g.kind() == Formula::Kind::Const) {
            if (g.value() == 0) return {};
            throw std::invalid_argument("cnf clauses: stray constant 1 clause");
        }
        if (g.kind() != Formula::Kind::Or) throw std::invalid_argument("cnf clauses: not a clause");
        Clause cl;
        for (const auto& lit : g.children()) {
            if (lit.kind() != Formula::Kind::Var)
                throw std::invalid_argument("cnf clauses: clause literal is not a variable");
            cl.push_back(lit.position());
        }
        return cl;
    };
    if (cnf.kind() == Formula::Kind::Const) {
        if (cnf.value() == 1) return {};
        return {Clause{}};
    }
    if (cnf.kind() == Formula::Kind::And) {
        for (const auto& c : cnf.children()) out.push_back(clause_of(c));
        return out;
    }
    out.push_back(clause_of(cnf));
    return out;
}

} // namespace ttlab
