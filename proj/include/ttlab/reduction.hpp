#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ttlab/bitstream.hpp"
#include "ttlab/classes.hpp"
#include "ttlab/formula.hpp"

namespace ttlab {

// Computable bound on query positions, n |-> bound(n).
class UseBound {
public:
    static UseBound affine(std::uint64_t a, std::uint64_t b); // a*n + b
    static UseBound table(std::vector<std::uint64_t> values); // errors past the end

    std::uint64_t bound(std::uint64_t n) const;
    // Running maximum max{bound(i) : i <= n}.
    std::uint64_t monotone(std::uint64_t n) const;

    nlohmann::json describe() const;
    static UseBound from_json(const nlohmann::json& j);

private:
    bool is_affine_ = true;
    std::uint64_t a_ = 1, b_ = 0;
    std::vector<std::uint64_t> values_;
    std::vector<std::uint64_t> running_max_;
};

// Row formula template: a formula tree whose variable leaves carry affine
// index expressions a*n + b, instantiated per row index n.
class RowTemplate {
public:
    enum class Kind { Var, Const, Not, And, Or, Xor };

    static RowTemplate var(std::uint64_t a, std::uint64_t b);
    static RowTemplate constant(Bit value);
    static RowTemplate negate(RowTemplate child);
    static RowTemplate conj(std::vector<RowTemplate> children);
    static RowTemplate disj(std::vector<RowTemplate> children);
    static RowTemplate parity(std::vector<RowTemplate> children);

    Formula instantiate(std::uint64_t n) const;

    nlohmann::json to_json() const;
    static RowTemplate from_json(const nlohmann::json& j);

private:
    struct Node;
    RowTemplate() = default;
    explicit RowTemplate(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

// A truth-table reduction at finite horizon: one formula per row index,
// given either by closed-form rules (row n uses rule n mod #rules,
// instantiated at n) or by an explicit finite table.
class TTReduction {
public:
    static TTReduction from_rules(std::vector<RowTemplate> rules, ReductionClass declared,
                                  std::optional<std::uint64_t> horizon = std::nullopt);
    static TTReduction from_table(std::vector<Formula> rows, ReductionClass declared);

    Formula row(std::uint64_t n) const; // throws "horizon exceeded" past the end
    std::vector<std::uint64_t> query_set(std::uint64_t n) const;
    const ReductionClass& declared_class() const { return declared_; }
    std::optional<std::uint64_t> declared_horizon() const { return horizon_; }

    nlohmann::json to_json() const;
    static TTReduction from_json(const nlohmann::json& j);

    // Explicit tables round-trip through CSV with columns: row index,
    // formula text.
    std::string to_csv() const;
    static TTReduction from_csv(const std::string& text, ReductionClass declared);

private:
    TTReduction() = default;
    bool ruled_ = false;
    std::vector<RowTemplate> rules_;
    std::vector<Formula> table_;
    ReductionClass declared_ = ReductionClass::tt();
    std::optional<std::uint64_t> horizon_;
};

// The reduced stream n |-> row_n(oracle), evaluated lazily.
BitStream apply(TTReduction reduction, BitStream oracle);

struct WttAudit {
    bool ok = true;
    std::optional<std::uint64_t> first_violation;
};

// True iff for every n <= upto the largest query of row n stays within
// bound(n).
WttAudit check_wtt(const TTReduction& r, const UseBound& u, std::uint64_t upto);

struct ClassAudit {
    bool ok = true;
    std::optional<std::uint64_t> first_violation;
};

// Structural audit of the declared class on rows 0..upto. Class "one"
// additionally requires the row positions to be injective across rows.
ClassAudit verify_class(const TTReduction& r, std::uint64_t upto);

} // namespace ttlab
