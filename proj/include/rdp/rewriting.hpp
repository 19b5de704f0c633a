#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "rdp/substitution.hpp"
#include "rdp/term.hpp"

namespace rdp {

inline constexpr std::size_t kDefaultFuel = 10000;

/// A rewrite rule lhs → rhs; `index` is its place in the owning system.
struct Rule {
    Term lhs;
    Term rhs;
    std::size_t index = 0;

    bool operator==(const Rule&) const = default;
    std::string to_string() const { return lhs.to_string() + " -> " + rhs.to_string(); }
};

/// An ordered term rewriting system over a signature.
///
/// Construction enforces the usual rule restrictions: the lhs is not a
/// variable and every rhs variable occurs in the lhs. Rule indices are
/// assigned 0..n-1 in the given order.
class Trs {
public:
    Trs() = default;
    Trs(Signature signature, std::set<Variable> variables, std::vector<std::pair<Term, Term>> rules);

    /// Builds the signature from the rule terms themselves.
    static Trs from_rules(std::vector<std::pair<Term, Term>> rules);

    const Signature& signature() const { return signature_; }
    const std::set<Variable>& variables() const { return variables_; }
    const std::vector<Rule>& rules() const { return rules_; }
    const Rule& rule(std::size_t i) const;
    std::size_t size() const { return rules_.size(); }

    bool is_defined(const std::string& symbol) const { return by_root_.count(symbol) != 0; }
    /// Indices of the rules whose lhs has root `symbol`, ascending.
    const std::vector<std::size_t>& rules_with_root(const std::string& symbol) const;

    /// Adds symbols that occur in no rule (constructors used only in queries).
    void extend_signature(const Symbol& sym);

    bool operator==(const Trs& other) const {
        return signature_ == other.signature_ && variables_ == other.variables_ && rules_ == other.rules_;
    }

private:
    Signature signature_;
    std::set<Variable> variables_;
    std::vector<Rule> rules_;
    std::map<std::string, std::vector<std::size_t>> by_root_;
};

enum class RelationMode { Full, NonRoot, Innermost, NonRootInnermost };

std::string to_string(RelationMode mode);
/// Accepts "full", "nonroot", "innermost", "nonroot-innermost" (and a few spellings).
std::optional<RelationMode> parse_relation_mode(const std::string& text);
bool is_innermost(RelationMode mode);
bool is_non_root(RelationMode mode);

struct Step {
    Position position;
    std::size_t rule_index = 0;
    Substitution substitution;
    Term result;

    bool operator==(const Step&) const = default;
};

struct DerivationTrace {
    Term start;
    std::vector<Step> steps;
    RelationMode mode = RelationMode::Full;

    const Term& final_term() const { return steps.empty() ? start : steps.back().result; }
    std::size_t length() const { return steps.size(); }

    bool operator==(const DerivationTrace&) const = default;
};

std::set<Symbol> defined_symbols(const Trs& trs);

/// Lowest-index step at `p` that is valid under `mode`. Throws InvalidPosition.
std::optional<Step> reduce_at(const Trs& trs, const Term& s, const Position& p, RelationMode mode);

/// All one-step reducts, ordered by (position pre-order, rule index).
std::vector<Step> successors(const Trs& trs, const Term& s, RelationMode mode);

bool is_normal_form(const Trs& trs, const Term& s, RelationMode mode);
/// Every proper subterm is a normal form.
bool is_nr_normal_form(const Trs& trs, const Term& s);

/// Checks one step from `source` against the rules and the mode's side conditions.
bool is_valid_step(const Trs& trs, const Term& source, const Step& step, RelationMode mode);
/// Replays every step of `trace` under its own mode.
bool replays(const Trs& trs, const DerivationTrace& trace);

struct NormalizeResult {
    DerivationTrace trace;
    bool complete = false;  ///< false: fuel ran out, `trace` is the partial derivation

    const Term& normal_form() const { return trace.final_term(); }
};

/// Leftmost-lowest normalization, at most `fuel` steps.
NormalizeResult normalize(const Trs& trs, const Term& s, RelationMode mode, std::size_t fuel = kDefaultFuel);

struct ReachResult {
    std::optional<DerivationTrace> trace;  ///< set iff the target was reached
    std::size_t explored = 0;              ///< distinct terms visited
    bool closure_complete = false;         ///< the whole reachable set was enumerated

    bool found() const { return trace.has_value(); }
};

/// Breadth-first search for a derivation s →* t; `fuel` caps visited terms.
ReachResult derives(const Trs& trs, const Term& s, const Term& t, RelationMode mode,
                    std::size_t fuel = kDefaultFuel);

struct DescendantSet {
    std::vector<Term> terms;  ///< breadth-first discovery order, `s` first
    bool truncated = false;

    bool contains(const Term& t) const;
};

DescendantSet descendants(const Trs& trs, const Term& s, RelationMode mode, std::size_t fuel = kDefaultFuel);

/// Non-root innermost steps of `u` whose redex lies inside argument `k`.
std::vector<Step> argument_steps(const Trs& trs, const Term& u, std::size_t k);

}  // namespace rdp
