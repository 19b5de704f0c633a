#include "rdp/substitution.hpp"

#include <algorithm>

#include "rdp/rewriting.hpp"

namespace rdp {

Substitution::Substitution(std::initializer_list<std::pair<Variable, Term>> bindings) {
    for (const auto& [x, t] : bindings) bind(x, t);
}

void Substitution::bind(const Variable& x, const Term& t) {
    if (t.is_var() && t.variable() == x) {
        map_.erase(x);
        return;
    }
    map_.insert_or_assign(x, t);
}

const Term* Substitution::lookup(const Variable& x) const {
    auto it = map_.find(x);
    return it == map_.end() ? nullptr : &it->second;
}

std::set<Variable> Substitution::domain() const {
    std::set<Variable> out;
    for (const auto& [x, _] : map_) out.insert(x);
    return out;
}

Substitution Substitution::restricted_to(const std::set<Variable>& keep) const {
    Substitution out;
    for (const auto& [x, t] : map_) {
        if (keep.count(x)) out.map_.emplace(x, t);
    }
    return out;
}

std::string Substitution::to_string() const {
    std::string out = "{";
    bool first = true;
    for (const auto& [x, t] : map_) {
        if (!first) out += ", ";
        first = false;
        out += x.name + "↦" + t.to_string();
    }
    return out + "}";
}

Term apply(const Substitution& sigma, const Term& t) {
    if (sigma.empty()) return t;
    if (t.is_var()) {
        const Term* img = sigma.lookup(t.variable());
        return img ? *img : t;
    }
    std::vector<Term> args;
    args.reserve(t.args().size());
    bool changed = false;
    for (const auto& a : t.args()) {
        args.push_back(apply(sigma, a));
        // Identical nodes keep sharing; avoids rebuilding ground subterms.
        changed = changed || !(args.back() == a);
    }
    if (!changed) return t;
    return Term::app(t.symbol(), std::move(args));
}

namespace {

bool match_rec(const Term& pattern, const Term& subject, std::map<Variable, Term>& bound) {
    if (pattern.is_var()) {
        auto [it, inserted] = bound.emplace(pattern.variable(), subject);
        return inserted || it->second == subject;
    }
    if (subject.is_var() || pattern.symbol() != subject.symbol()) return false;
    auto ps = pattern.args();
    auto ss = subject.args();
    for (std::size_t i = 0; i < ps.size(); ++i) {
        if (!match_rec(ps[i], ss[i], bound)) return false;
    }
    return true;
}

}  // namespace

std::optional<Substitution> match(const Term& pattern, const Term& subject) {
    std::map<Variable, Term> bound;
    if (!match_rec(pattern, subject, bound)) return std::nullopt;
    Substitution sigma;
    for (const auto& [x, t] : bound) sigma.bind(x, t);
    return sigma;
}

Variable fresh_variable(const Variable& base, const std::set<Variable>& taken) {
    auto stem = base.name.substr(0, base.name.find('#'));
    for (std::size_t k = 1;; ++k) {
        Variable candidate{stem + "#" + std::to_string(k)};
        if (!taken.count(candidate)) return candidate;
    }
}

std::pair<Term, Substitution> rename_apart(const Term& t, const std::set<Variable>& forbidden) {
    auto vars = vars_in_order(t);
    std::set<Variable> taken = forbidden;
    taken.insert(vars.begin(), vars.end());
    Substitution renaming;
    for (const auto& x : vars) {
        if (!forbidden.count(x)) continue;
        auto fresh = fresh_variable(x, taken);
        taken.insert(fresh);
        renaming.bind(x, Term::var(fresh));
    }
    return {apply(renaming, t), renaming};
}

bool is_normal_substitution(const Substitution& sigma, const Trs& trs) {
    return std::all_of(sigma.bindings().begin(), sigma.bindings().end(), [&](const auto& kv) {
        return is_normal_form(trs, kv.second, RelationMode::Full);
    });
}

}  // namespace rdp
