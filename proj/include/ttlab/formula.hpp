#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "ttlab/bitstream.hpp"

namespace ttlab {

// Truth-table row over oracle positions. Connectives: negation, n-ary
// conjunction / disjunction / parity sum, plus constants. Immutable tree.
class Formula {
public:
    enum class Kind { Var, Const, Not, And, Or, Xor };

    Formula() = default;

    static Formula var(std::uint64_t position);
    static Formula constant(Bit b);
    static Formula negate(Formula f);
    static Formula conj(std::vector<Formula> children);
    static Formula disj(std::vector<Formula> children);
    static Formula parity(std::vector<Formula> children);

    bool valid() const { return static_cast<bool>(node_); }
    Kind kind() const;
    std::uint64_t position() const;       // Var only
    Bit value() const;                    // Const only
    const Formula& child() const;         // Not only
    const std::vector<Formula>& children() const; // And/Or/Xor only

    bool operator==(const Formula& other) const;

    // Sorted set of distinct oracle positions the formula reads.
    std::vector<std::uint64_t> variables() const;

    Bit evaluate(const BitStream& oracle) const;
    Bit evaluate(const std::function<Bit(std::uint64_t)>& oracle) const;

    std::string to_string() const;
    nlohmann::json to_json() const;
    static Formula from_json(const nlohmann::json& j);

private:
    struct Node;
    explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

struct ParseError : std::runtime_error {
    std::size_t offset;
    ParseError(std::size_t off, const std::string& what)
        : std::runtime_error("parse error at offset " + std::to_string(off) + ": " + what),
          offset(off) {}
};

// Grammar: variables v<k>, literals 0 and 1, operators ! & + | with
// precedence ! > & > + > |, parentheses. Same-operator runs parse into one
// n-ary node; parenthesized subterms stay nested.
Formula parse_formula(std::string_view text);

// Conjunctive normal form of a monotone (And/Or/Var/Const) formula: an And
// of Or-clauses of variables, with constants folded away. Clause order
// follows the distribution order. Throws if the formula contains Not/Xor
// or if the clause count would exceed the given cap.
Formula to_cnf(const Formula& f, std::size_t clause_cap = 1u << 16);

// Clause view of a CNF formula: one vector of positions per clause. A
// formula equal to constant 1 yields zero clauses; a constant-0 clause is
// represented as an empty clause.
std::vector<std::vector<std::uint64_t>> cnf_clauses(const Formula& cnf);

} // namespace ttlab
