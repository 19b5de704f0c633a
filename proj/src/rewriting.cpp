#include "rdp/rewriting.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>
#include <unordered_set>

#include "rdp/error.hpp"

namespace rdp {

namespace {

void add_symbols(Signature& sig, const Term& t) {
    if (t.is_var()) return;
    sig.add(t.symbol());
    for (const auto& a : t.args()) add_symbols(sig, a);
}

void check_symbols(const Signature& sig, const Term& t) {
    if (t.is_var()) return;
    auto arity = sig.arity_of(t.symbol().name);
    if (!arity) throw Error("symbol '" + t.symbol().name + "' is not in the signature");
    if (*arity != t.symbol().arity) {
        throw ArityMismatch("symbol '" + t.symbol().name + "' used with arity " +
                            std::to_string(t.symbol().arity) + ", declared " + std::to_string(*arity));
    }
    for (const auto& a : t.args()) check_symbols(sig, a);
}

}  // namespace

Trs::Trs(Signature signature, std::set<Variable> variables, std::vector<std::pair<Term, Term>> rules)
    : signature_(std::move(signature)), variables_(std::move(variables)) {
    rules_.reserve(rules.size());
    for (auto& [lhs, rhs] : rules) {
        const auto index = rules_.size();
        if (lhs.is_var()) {
            throw RuleRestrictionViolated("rule " + std::to_string(index) + ": lhs " + lhs.to_string() +
                                          " is a variable");
        }
        auto lhs_vars = vars_of(lhs);
        for (const auto& x : vars_of(rhs)) {
            if (!lhs_vars.count(x)) {
                throw RuleRestrictionViolated("rule " + std::to_string(index) + ": variable " + x.name +
                                              " of the rhs does not occur in the lhs");
            }
        }
        check_symbols(signature_, lhs);
        check_symbols(signature_, rhs);
        variables_.insert(lhs_vars.begin(), lhs_vars.end());
        by_root_[lhs.symbol().name].push_back(index);
        rules_.push_back(Rule{std::move(lhs), std::move(rhs), index});
    }
    for (const auto& x : variables_) {
        if (signature_.contains(x.name)) {
            throw Error("name '" + x.name + "' is used both as a variable and as a symbol");
        }
    }
}

Trs Trs::from_rules(std::vector<std::pair<Term, Term>> rules) {
    Signature sig;
    std::set<Variable> vars;
    for (const auto& [l, r] : rules) {
        add_symbols(sig, l);
        add_symbols(sig, r);
        auto vl = vars_of(l);
        vars.insert(vl.begin(), vl.end());
    }
    return Trs(std::move(sig), std::move(vars), std::move(rules));
}

const Rule& Trs::rule(std::size_t i) const {
    if (i >= rules_.size()) {
        throw IndexOutOfRange("rule index " + std::to_string(i) + " out of range (" +
                              std::to_string(rules_.size()) + " rules)");
    }
    return rules_[i];
}

const std::vector<std::size_t>& Trs::rules_with_root(const std::string& symbol) const {
    static const std::vector<std::size_t> none;
    auto it = by_root_.find(symbol);
    return it == by_root_.end() ? none : it->second;
}

void Trs::extend_signature(const Symbol& sym) {
    if (variables_.count(Variable{sym.name})) {
        throw Error("name '" + sym.name + "' is declared as a variable");
    }
    signature_.add(sym);
}

std::string to_string(RelationMode mode) {
    switch (mode) {
        case RelationMode::Full: return "full";
        case RelationMode::NonRoot: return "nonroot";
        case RelationMode::Innermost: return "innermost";
        case RelationMode::NonRootInnermost: return "nonroot-innermost";
    }
    return "?";
}

std::optional<RelationMode> parse_relation_mode(const std::string& text) {
    std::string t;
    for (char c : text) {
        if (c != '-' && c != '_') t += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    if (t == "full") return RelationMode::Full;
    if (t == "nonroot" || t == "nr") return RelationMode::NonRoot;
    if (t == "innermost" || t == "inn") return RelationMode::Innermost;
    if (t == "nonrootinnermost" || t == "nrinnermost" || t == "nri") return RelationMode::NonRootInnermost;
    return std::nullopt;
}

bool is_innermost(RelationMode mode) {
    return mode == RelationMode::Innermost || mode == RelationMode::NonRootInnermost;
}

bool is_non_root(RelationMode mode) {
    return mode == RelationMode::NonRoot || mode == RelationMode::NonRootInnermost;
}

std::set<Symbol> defined_symbols(const Trs& trs) {
    std::set<Symbol> out;
    for (const auto& r : trs.rules()) out.insert(r.lhs.symbol());
    return out;
}

// ---------------------------------------------------------------------------
// Redexes

namespace {

bool is_root_redex(const Trs& trs, const Term& t) {
    if (t.is_var()) return false;
    for (auto i : trs.rules_with_root(t.symbol().name)) {
        if (match(trs.rules()[i].lhs, t)) return true;
    }
    return false;
}

bool has_redex(const Trs& trs, const Term& t) {
    if (t.is_var()) return false;
    if (is_root_redex(trs, t)) return true;
    return std::any_of(t.args().begin(), t.args().end(), [&](const Term& a) { return has_redex(trs, a); });
}

bool args_normal(const Trs& trs, const Term& t) {
    return std::none_of(t.args().begin(), t.args().end(), [&](const Term& a) { return has_redex(trs, a); });
}

Step make_step(const Trs& trs, const Term& s, const Position& p, std::size_t rule_index, Substitution sigma) {
    const auto& rule = trs.rules()[rule_index];
    Term result = replace_at(s, p, apply(sigma, rule.rhs));
    return Step{p, rule_index, std::move(sigma), std::move(result)};
}

// Post-order walk; returns whether `u` is a normal form and appends the steps
// available at or below `p`.
bool collect_steps(const Trs& trs, const Term& s, const Term& u, std::vector<std::size_t>& path,
                   RelationMode mode, std::vector<Step>& out) {
    if (u.is_var()) return true;
    bool children_normal = true;
    auto args = u.args();
    for (std::size_t i = 0; i < args.size(); ++i) {
        path.push_back(i + 1);
        children_normal = collect_steps(trs, s, args[i], path, mode, out) && children_normal;
        path.pop_back();
    }
    bool root_normal = true;
    const bool position_ok = !(is_non_root(mode) && path.empty());
    const bool innermost_ok = !is_innermost(mode) || children_normal;
    for (auto ri : trs.rules_with_root(u.symbol().name)) {
        auto sigma = match(trs.rules()[ri].lhs, u);
        if (!sigma) continue;
        root_normal = false;
        if (position_ok && innermost_ok) {
            out.push_back(make_step(trs, s, Position(path), ri, std::move(*sigma)));
        }
    }
    return children_normal && root_normal;
}

// First step in (pre-order, rule index) order.
std::optional<Step> first_step(const Trs& trs, const Term& s, const Term& u, std::vector<std::size_t>& path,
                               RelationMode mode) {
    if (u.is_var()) return std::nullopt;
    const bool position_ok = !(is_non_root(mode) && path.empty());
    if (position_ok && (!is_innermost(mode) || args_normal(trs, u))) {
        for (auto ri : trs.rules_with_root(u.symbol().name)) {
            if (auto sigma = match(trs.rules()[ri].lhs, u)) {
                return make_step(trs, s, Position(path), ri, std::move(*sigma));
            }
        }
    }
    auto args = u.args();
    for (std::size_t i = 0; i < args.size(); ++i) {
        path.push_back(i + 1);
        auto step = first_step(trs, s, args[i], path, mode);
        path.pop_back();
        if (step) return step;
    }
    return std::nullopt;
}

}  // namespace

std::optional<Step> reduce_at(const Trs& trs, const Term& s, const Position& p, RelationMode mode) {
    const Term& redex = subterm_at(s, p);
    if (is_non_root(mode) && p.is_root()) return std::nullopt;
    if (redex.is_var()) return std::nullopt;
    if (is_innermost(mode) && !args_normal(trs, redex)) return std::nullopt;
    for (auto ri : trs.rules_with_root(redex.symbol().name)) {
        if (auto sigma = match(trs.rules()[ri].lhs, redex)) {
            return make_step(trs, s, p, ri, std::move(*sigma));
        }
    }
    return std::nullopt;
}

std::vector<Step> successors(const Trs& trs, const Term& s, RelationMode mode) {
    std::vector<Step> out;
    std::vector<std::size_t> path;
    collect_steps(trs, s, s, path, mode, out);
    std::stable_sort(out.begin(), out.end(),
                     [](const Step& a, const Step& b) { return a.position < b.position; });
    return out;
}

bool is_normal_form(const Trs& trs, const Term& s, RelationMode mode) {
    switch (mode) {
        case RelationMode::Full:
        case RelationMode::Innermost:
            // Any redex contains an innermost one.
            return !has_redex(trs, s);
        case RelationMode::NonRoot:
        case RelationMode::NonRootInnermost:
            return is_nr_normal_form(trs, s);
    }
    return true;
}

bool is_nr_normal_form(const Trs& trs, const Term& s) { return args_normal(trs, s); }

bool is_valid_step(const Trs& trs, const Term& source, const Step& step, RelationMode mode) {
    if (!is_position_of(source, step.position)) return false;
    if (is_non_root(mode) && step.position.is_root()) return false;
    if (step.rule_index >= trs.size()) return false;
    const auto& rule = trs.rules()[step.rule_index];
    const Term& redex = subterm_at(source, step.position);
    if (!(apply(step.substitution, rule.lhs) == redex)) return false;
    if (is_innermost(mode) && !is_nr_normal_form(trs, redex)) return false;
    return step.result == replace_at(source, step.position, apply(step.substitution, rule.rhs));
}

bool replays(const Trs& trs, const DerivationTrace& trace) {
    Term cur = trace.start;
    for (const auto& step : trace.steps) {
        if (!is_valid_step(trs, cur, step, trace.mode)) return false;
        cur = step.result;
    }
    return true;
}

NormalizeResult normalize(const Trs& trs, const Term& s, RelationMode mode, std::size_t fuel) {
    NormalizeResult res{DerivationTrace{s, {}, mode}, false};
    Term cur = s;
    std::vector<std::size_t> path;
    while (true) {
        auto step = first_step(trs, cur, cur, path, mode);
        if (!step) {
            res.complete = true;
            return res;
        }
        if (res.trace.steps.size() >= fuel) return res;
        cur = step->result;
        res.trace.steps.push_back(std::move(*step));
    }
}

namespace {

struct Visit {
    std::optional<Term> parent;
    std::optional<Step> via;
};

DerivationTrace rebuild(const std::unordered_map<Term, Visit, TermHash>& seen, const Term& start, const Term& end,
                        RelationMode mode) {
    std::vector<Step> steps;
    Term cur = end;
    while (!(cur == start)) {
        const auto& v = seen.at(cur);
        steps.push_back(*v.via);
        cur = *v.parent;
    }
    std::reverse(steps.begin(), steps.end());
    return DerivationTrace{start, std::move(steps), mode};
}

}  // namespace

ReachResult derives(const Trs& trs, const Term& s, const Term& t, RelationMode mode, std::size_t fuel) {
    ReachResult res;
    if (s == t) {
        res.trace = DerivationTrace{s, {}, mode};
        res.explored = 1;
        return res;
    }
    if (fuel == 0) return res;
    std::unordered_map<Term, Visit, TermHash> seen;
    seen.emplace(s, Visit{});
    std::deque<Term> queue{s};
    bool truncated = false;
    while (!queue.empty()) {
        Term u = queue.front();
        queue.pop_front();
        for (auto& step : successors(trs, u, mode)) {
            if (seen.count(step.result)) continue;
            if (seen.size() >= fuel) {
                truncated = true;
                break;
            }
            Term v = step.result;
            seen.emplace(v, Visit{u, std::move(step)});
            if (v == t) {
                res.trace = rebuild(seen, s, v, mode);
                res.explored = seen.size();
                return res;
            }
            queue.push_back(std::move(v));
        }
        if (truncated) break;
    }
    res.explored = seen.size();
    res.closure_complete = !truncated;
    return res;
}

bool DescendantSet::contains(const Term& t) const {
    return std::find(terms.begin(), terms.end(), t) != terms.end();
}

DescendantSet descendants(const Trs& trs, const Term& s, RelationMode mode, std::size_t fuel) {
    DescendantSet out;
    if (fuel == 0) {
        out.truncated = true;
        return out;
    }
    std::unordered_set<Term, TermHash> seen{s};
    out.terms.push_back(s);
    for (std::size_t head = 0; head < out.terms.size(); ++head) {
        Term u = out.terms[head];
        for (const auto& step : successors(trs, u, mode)) {
            if (seen.count(step.result)) continue;
            if (seen.size() >= fuel) {
                out.truncated = true;
                return out;
            }
            seen.insert(step.result);
            out.terms.push_back(step.result);
        }
    }
    return out;
}

std::vector<Step> argument_steps(const Trs& trs, const Term& u, std::size_t k) {
    std::vector<Step> out;
    for (auto& step : successors(trs, u, RelationMode::NonRootInnermost)) {
        if (step.position.first() == k) out.push_back(std::move(step));
    }
    return out;
}

}  // namespace rdp
