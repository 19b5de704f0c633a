#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>

#include "rdp/term.hpp"

namespace rdp {

class Trs;

/// Finite map from variables to terms. Identity bindings are never stored.
class Substitution {
public:
    Substitution() = default;
    Substitution(std::initializer_list<std::pair<Variable, Term>> bindings);

    /// Binds `x` to `t`, replacing a previous binding; binding x to itself removes it.
    void bind(const Variable& x, const Term& t);
    const Term* lookup(const Variable& x) const;
    bool binds(const Variable& x) const { return map_.count(x) != 0; }

    bool empty() const { return map_.empty(); }
    std::size_t size() const { return map_.size(); }
    std::set<Variable> domain() const;
    const std::map<Variable, Term>& bindings() const { return map_; }

    /// Keeps only bindings whose variable is in `keep`.
    Substitution restricted_to(const std::set<Variable>& keep) const;

    /// "{x↦0, y↦s(0)}"
    std::string to_string() const;

    bool operator==(const Substitution&) const = default;

private:
    std::map<Variable, Term> map_;
};

Term apply(const Substitution& sigma, const Term& t);

/// The unique σ with dom(σ) ⊆ vars(pattern) and σ(pattern) = subject, if any.
std::optional<Substitution> match(const Term& pattern, const Term& subject);

/// Fresh name for `base` of the form `base#k`, smallest k >= 1 outside `taken`.
Variable fresh_variable(const Variable& base, const std::set<Variable>& taken);

/// Renames the variables of `t` that occur in `forbidden` to fresh `#k` names.
/// Returns the variant and the renaming that produced it.
std::pair<Term, Substitution> rename_apart(const Term& t, const std::set<Variable>& forbidden);

/// True iff every term in the range of `sigma` is a normal form of E.
bool is_normal_substitution(const Substitution& sigma, const Trs& trs);

}  // namespace rdp
