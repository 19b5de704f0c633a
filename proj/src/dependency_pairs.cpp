#include "rdp/dependency_pairs.hpp"

#include <algorithm>
#include <functional>
#include <unordered_map>
#include <unordered_set>

#include "rdp/error.hpp"

namespace rdp {

std::string DepPairAlt::to_string() const {
    return "(" + std::to_string(rule_index) + ", " + position.to_string() + ")";
}

std::string DepPair::to_string() const {
    return "<" + lhs.to_string() + ", " + rhs_sub.to_string() + ">";
}

std::string to_string(Status s) {
    switch (s) {
        case Status::Verified: return "verified";
        case Status::NotFound: return "not-found";
        case Status::Failure: return "failure";
    }
    return "?";
}

std::string to_string(FailureKind k) {
    switch (k) {
        case FailureKind::PreconditionFailed: return "precondition-failed";
        case FailureKind::InvalidDepPair: return "invalid-dep-pair";
        case FailureKind::NoRootRule: return "no-root-rule";
        case FailureKind::NoMintWithinFuel: return "no-mint-within-fuel";
        case FailureKind::NoLoopCertificate: return "no-loop-certificate";
        case FailureKind::FuelExhaustedNormalizing: return "fuel-exhausted-normalizing";
        case FailureKind::ChainCheckFailed: return "chain-check-failed";
    }
    return "?";
}

std::string Failure::to_string() const {
    auto k = rdp::to_string(kind);
    return message.empty() ? k : k + ": " + message;
}

// ---------------------------------------------------------------------------
// Extraction

bool is_dep_pair_alt(const Trs& trs, const DepPairAlt& dp) {
    if (dp.rule_index >= trs.size()) return false;
    const auto& rhs = trs.rules()[dp.rule_index].rhs;
    if (!is_position_of(rhs, dp.position)) return false;
    const Term& sub = subterm_at(rhs, dp.position);
    return sub.is_app() && trs.is_defined(sub.symbol().name);
}

std::vector<DepPairAlt> dep_pairs_alt(const Trs& trs) {
    std::vector<DepPairAlt> out;
    for (const auto& rule : trs.rules()) {
        for (auto& p : positions_of(rule.rhs)) {
            DepPairAlt dp{rule.index, std::move(p)};
            if (is_dep_pair_alt(trs, dp)) out.push_back(std::move(dp));
        }
    }
    return out;
}

DepPair to_standard(const Trs& trs, const DepPairAlt& dp) {
    if (!is_dep_pair_alt(trs, dp)) throw InvalidDepPair(0, dp.to_string() + " is not a dependency pair");
    const auto& rule = trs.rules()[dp.rule_index];
    return DepPair{rule.lhs, subterm_at(rule.rhs, dp.position)};
}

DepPair canonical_variant(const DepPair& dp) {
    auto order = vars_in_order(Term::app(Symbol{"<pair>", 2}, {dp.lhs, dp.rhs_sub}));
    Substitution renaming;
    // Two passes so that a variable already named v_k is not captured.
    Substitution to_tmp;
    for (std::size_t i = 0; i < order.size(); ++i) {
        to_tmp.bind(order[i], Term::var("#tmp" + std::to_string(i + 1)));
        renaming.bind(Variable{"#tmp" + std::to_string(i + 1)}, Term::var("v" + std::to_string(i + 1)));
    }
    return DepPair{apply(renaming, apply(to_tmp, dp.lhs)), apply(renaming, apply(to_tmp, dp.rhs_sub))};
}

std::vector<DepPair> standard_dep_pairs(const Trs& trs, bool dedup) {
    std::vector<DepPair> out;
    std::vector<DepPair> seen;
    for (const auto& alt : dep_pairs_alt(trs)) {
        auto dp = to_standard(trs, alt);
        if (dedup) {
            auto canon = canonical_variant(dp);
            if (std::find(seen.begin(), seen.end(), canon) != seen.end()) continue;
            seen.push_back(std::move(canon));
        }
        out.push_back(std::move(dp));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Chains

namespace {

Failure precondition(std::string msg) { return Failure{FailureKind::PreconditionFailed, std::move(msg)}; }

LinkResult failed_link(Failure f) {
    LinkResult r;
    r.status = Status::Failure;
    r.failure = std::move(f);
    return r;
}

bool domain_within(const Substitution& sigma, const Term& t) {
    auto vars = vars_of(t);
    return std::all_of(sigma.bindings().begin(), sigma.bindings().end(),
                       [&](const auto& kv) { return vars.count(kv.first) != 0; });
}

PairInstance instance_of(const Trs& trs, const ChainEntry& e) { return {to_standard(trs, e.dp), e.sigma}; }

}  // namespace

LinkResult check_chained_pairs(const Trs& trs, const PairInstance& first, const PairInstance& second,
                               bool innermost, std::size_t fuel) {
    if (!domain_within(first.sigma, first.pair.lhs) || !domain_within(second.sigma, second.pair.lhs)) {
        return failed_link(precondition("substitution binds variables outside its rule"));
    }
    const Term lhs1 = apply(first.sigma, first.pair.lhs);
    const Term lhs2 = apply(second.sigma, second.pair.lhs);
    if (innermost) {
        if (!is_nr_normal_form(trs, lhs1)) {
            return failed_link(precondition("nr-normal-form violation: " + lhs1.to_string()));
        }
        if (!is_nr_normal_form(trs, lhs2)) {
            return failed_link(precondition("nr-normal-form violation: " + lhs2.to_string()));
        }
    }
    const Term source = apply(first.sigma, first.pair.rhs_sub);
    const auto mode = innermost ? RelationMode::NonRootInnermost : RelationMode::NonRoot;
    auto reach = derives(trs, source, lhs2, mode, fuel);
    LinkResult r;
    r.explored = reach.explored;
    r.closure_complete = reach.closure_complete;
    if (reach.found()) {
        r.status = Status::Verified;
        r.trace = std::move(reach.trace);
    } else {
        r.status = Status::NotFound;
    }
    return r;
}

LinkResult check_chained(const Trs& trs, const ChainEntry& first, const ChainEntry& second, bool innermost,
                         std::size_t fuel) {
    if (!is_dep_pair_alt(trs, first.dp)) {
        return failed_link({FailureKind::InvalidDepPair, first.dp.to_string()});
    }
    if (!is_dep_pair_alt(trs, second.dp)) {
        return failed_link({FailureKind::InvalidDepPair, second.dp.to_string()});
    }
    return check_chained_pairs(trs, instance_of(trs, first), instance_of(trs, second), innermost, fuel);
}

ChainVerdict verify_pair_chain(const Trs& trs, const std::vector<PairInstance>& chain, bool innermost,
                               std::size_t fuel) {
    ChainVerdict v;
    for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
        auto link = check_chained_pairs(trs, chain[i], chain[i + 1], innermost, fuel);
        v.explored += link.explored;
        if (!link.verified()) {
            v.status = link.status;
            v.failed_link = i;
            v.failure = link.failure;
            return v;
        }
        v.traces.push_back(std::move(*link.trace));
    }
    return v;
}

ChainVerdict verify_chain_prefix(const Trs& trs, const ChainWitness& w, bool innermost, std::size_t fuel) {
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (!is_dep_pair_alt(trs, w.entries[i].dp)) {
            ChainVerdict v;
            v.status = Status::Failure;
            v.failed_link = i == 0 ? 0 : i - 1;
            v.failure = Failure{FailureKind::InvalidDepPair, "entry " + std::to_string(i) + " " +
                                                                 w.entries[i].dp.to_string()};
            return v;
        }
    }
    std::vector<PairInstance> chain;
    chain.reserve(w.size());
    for (const auto& e : w.entries) chain.push_back(instance_of(trs, e));
    return verify_pair_chain(trs, chain, innermost, fuel);
}

std::vector<PairInstance> rename_witness_apart(const Trs& trs, const ChainWitness& w) {
    std::set<Variable> taken;
    for (const auto& e : w.entries) {
        auto vs = vars_of(trs.rule(e.dp.rule_index).lhs);
        taken.insert(vs.begin(), vs.end());
    }
    std::vector<PairInstance> out;
    for (const auto& e : w.entries) {
        auto dp = to_standard(trs, e.dp);
        Substitution renaming;
        Substitution sigma;
        for (const auto& x : vars_in_order(dp.lhs)) {
            auto fresh = fresh_variable(x, taken);
            taken.insert(fresh);
            renaming.bind(x, Term::var(fresh));
            if (const Term* img = e.sigma.lookup(x)) sigma.bind(fresh, *img);
        }
        out.push_back(PairInstance{DepPair{apply(renaming, dp.lhs), apply(renaming, dp.rhs_sub)}, sigma});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Chain → innermost derivation

std::pair<Term, Position> term_pos_dps_alt(const Trs& trs, const ChainWitness& w, std::size_t i) {
    if (i >= w.size()) {
        throw IndexOutOfRange("chain index " + std::to_string(i) + " out of range (length " +
                              std::to_string(w.size()) + ")");
    }
    std::optional<std::pair<Term, Position>> acc;
    for (std::size_t k = 0; k <= i; ++k) {
        const auto& e = w.entries[k];
        if (!is_dep_pair_alt(trs, e.dp)) throw InvalidDepPair(k, e.dp.to_string() + " is not a dependency pair");
        Term rhs = apply(e.sigma, trs.rules()[e.dp.rule_index].rhs);
        if (!acc) {
            acc.emplace(std::move(rhs), e.dp.position);
        } else {
            acc.emplace(replace_at(acc->first, acc->second, rhs), concat_positions(acc->second, e.dp.position));
        }
    }
    return *acc;
}

Outcome<ChainDerivation> derivation_from_chain(const Trs& trs, const ChainWitness& w, std::size_t fuel) {
    if (w.empty()) return precondition("empty witness");
    auto verdict = verify_chain_prefix(trs, w, true, fuel);
    if (!verdict.verified()) {
        std::string why = verdict.failure ? verdict.failure->to_string() : to_string(verdict.status);
        return precondition("witness is not an innermost chain (link " +
                            std::to_string(verdict.failed_link.value_or(0)) + ": " + why + ")");
    }
    ChainDerivation out;
    auto [term, pos] = term_pos_dps_alt(trs, w, 0);
    out.terms.push_back(term);
    out.positions.push_back(pos);
    for (std::size_t i = 0; i + 1 < w.size(); ++i) {
        const Term& current = out.terms.back();
        const Position& hole = out.positions.back();
        DerivationTrace link{current, {}, RelationMode::Innermost};
        Term cur = current;
        // The chain's non-root derivation, replayed inside the context.
        for (const auto& step : verdict.traces[i].steps) {
            Term next = replace_at(cur, hole, step.result);
            link.steps.push_back(Step{concat_positions(hole, step.position), step.rule_index, step.substitution, next});
            cur = std::move(next);
        }
        // One root step of the next pair's rule at the hole.
        const auto& entry = w.entries[i + 1];
        const auto& rule = trs.rules()[entry.dp.rule_index];
        auto sigma = match(rule.lhs, subterm_at(cur, hole));
        if (!sigma) return Failure{FailureKind::ChainCheckFailed, "lhs of link " + std::to_string(i) + " not reached"};
        Term next = replace_at(cur, hole, apply(*sigma, rule.rhs));
        link.steps.push_back(Step{hole, rule.index, *sigma, next});

        auto [expected, next_pos] = term_pos_dps_alt(trs, w, i + 1);
        if (!(next == expected) || !replays(trs, link) || !is_position_of(expected, next_pos)) {
            return Failure{FailureKind::ChainCheckFailed, "link " + std::to_string(i) + " does not replay"};
        }
        out.links.push_back(std::move(link));
        out.terms.push_back(std::move(expected));
        out.positions.push_back(std::move(next_pos));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Loop certificates

bool is_valid_certificate(const Trs& trs, const LoopCertificate& cert) {
    const auto& tr = cert.trace;
    if (tr.mode != RelationMode::Innermost || tr.steps.empty()) return false;
    if (!replays(trs, tr)) return false;
    const Term& end = tr.final_term();
    return is_position_of(end, cert.embedding) && subterm_at(end, cert.embedding) == tr.start;
}

namespace {

struct Graph {
    std::vector<Term> nodes;
    std::vector<std::vector<std::pair<std::size_t, Step>>> edges;
    std::vector<std::optional<std::size_t>> parent;  // BFS tree
    std::vector<std::optional<Step>> parent_step;
    std::unordered_map<Term, std::size_t, TermHash> index;
    std::vector<std::string> roots;  // distinct root symbols of the nodes

    bool has_root(const Term& t) const {
        return t.is_app() && std::find(roots.begin(), roots.end(), t.symbol().name) != roots.end();
    }

    void add(const Term& t, std::optional<std::size_t> par, std::optional<Step> via) {
        if (t.is_app() && !has_root(t)) roots.push_back(t.symbol().name);
        index.emplace(t, nodes.size());
        nodes.push_back(t);
        edges.emplace_back();
        parent.push_back(par);
        parent_step.push_back(std::move(via));
    }

    // Tree path ancestor → node, or nothing when `ancestor` is not above `node`.
    std::optional<std::vector<Step>> tree_path(std::size_t ancestor, std::size_t node) const {
        std::vector<Step> steps;
        for (std::size_t cur = node; cur != ancestor; cur = *parent[cur]) {
            if (!parent[cur]) return std::nullopt;
            steps.push_back(*parent_step[cur]);
        }
        std::reverse(steps.begin(), steps.end());
        return steps;
    }
};

// First cycle found by a depth-first search from node 0 in edge order.
std::optional<DerivationTrace> find_cycle(const Graph& g) {
    enum Color : unsigned char { White, Gray, Black };
    std::vector<Color> color(g.nodes.size(), White);
    struct Frame {
        std::size_t node;
        std::size_t next_edge;
    };
    std::vector<Frame> stack;
    std::vector<const Step*> path_steps;
    if (g.nodes.empty()) return std::nullopt;
    stack.push_back({0, 0});
    color[0] = Gray;
    while (!stack.empty()) {
        auto& top = stack.back();
        if (top.next_edge == g.edges[top.node].size()) {
            color[top.node] = Black;
            stack.pop_back();
            if (!path_steps.empty()) path_steps.pop_back();
            continue;
        }
        const auto& [to, step] = g.edges[top.node][top.next_edge++];
        if (color[to] == Gray) {
            std::size_t begin = 0;
            while (stack[begin].node != to) ++begin;
            DerivationTrace tr{g.nodes[to], {}, RelationMode::Innermost};
            for (std::size_t k = begin; k + 1 < stack.size(); ++k) tr.steps.push_back(*path_steps[k]);
            tr.steps.push_back(step);
            return tr;
        }
        if (color[to] == White) {
            color[to] = Gray;
            path_steps.push_back(&step);
            stack.push_back({to, 0});
        }
    }
    return std::nullopt;
}

// A proper subterm of node `v` that is one of its BFS-tree ancestors.
std::optional<LoopCertificate> find_embedding(const Graph& g, std::size_t v) {
    std::optional<LoopCertificate> found;
    std::vector<std::size_t> path;
    std::function<void(const Term&)> visit = [&](const Term& t) {
        auto args = t.args();
        for (std::size_t i = 0; i < args.size() && !found; ++i) {
            path.push_back(i + 1);
            auto it = g.has_root(args[i]) ? g.index.find(args[i]) : g.index.end();
            if (it != g.index.end()) {
                if (auto steps = g.tree_path(it->second, v)) {
                    found = LoopCertificate{DerivationTrace{args[i], std::move(*steps), RelationMode::Innermost},
                                            Position(path)};
                }
            }
            if (!found) visit(args[i]);
            path.pop_back();
        }
    };
    visit(g.nodes[v]);
    return found;
}

}  // namespace

LoopSearch detect_innermost_loop(const Trs& trs, const Term& s, std::size_t fuel) {
    LoopSearch out;
    if (fuel == 0) return out;
    Graph g;
    g.add(s, std::nullopt, std::nullopt);
    bool complete = true;
    auto finish = [&](std::optional<LoopCertificate> cert) {
        out.certificate = std::move(cert);
        out.explored = g.nodes.size();
        out.closure_complete = complete && !out.certificate;
        return out;
    };
    for (std::size_t head = 0; head < g.nodes.size(); ++head) {
        Term u = g.nodes[head];
        for (auto& step : successors(trs, u, RelationMode::Innermost)) {
            if (auto it = g.index.find(step.result); it != g.index.end()) {
                if (auto steps = g.tree_path(it->second, head)) {
                    steps->push_back(step);
                    return finish(LoopCertificate{
                        DerivationTrace{g.nodes[it->second], std::move(*steps), RelationMode::Innermost},
                        Position::root()});
                }
                g.edges[head].emplace_back(it->second, std::move(step));
                continue;
            }
            if (g.nodes.size() >= fuel) {
                complete = false;
                continue;
            }
            auto id = g.nodes.size();
            g.add(step.result, head, step);
            g.edges[head].emplace_back(id, std::move(step));
            if (auto cert = find_embedding(g, id)) return finish(std::move(cert));
        }
    }
    if (auto cycle = find_cycle(g)) return finish(LoopCertificate{std::move(*cycle), Position::root()});
    return finish(std::nullopt);
}

std::optional<MintSubterm> find_mint_subterm(const Trs& trs, const Term& t, std::size_t fuel) {
    if (t.is_var()) return std::nullopt;
    auto args = t.args();
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (auto inner = find_mint_subterm(trs, args[i], fuel)) {
            inner->position = concat_positions(Position{i + 1}, inner->position);
            return inner;
        }
    }
    auto search = detect_innermost_loop(trs, t, fuel);
    if (!search.certificate) return std::nullopt;
    return MintSubterm{Position::root(), std::move(*search.certificate)};
}

Outcome<DpAndSub> dp_and_sub_from_nrnf(const Trs& trs, const Term& t, std::size_t fuel) {
    if (t.is_var() || !is_nr_normal_form(trs, t)) {
        return precondition(t.to_string() + " has a reducible proper subterm");
    }
    bool any_rule = false;
    for (auto ri : trs.rules_with_root(t.symbol().name)) {
        const auto& rule = trs.rules()[ri];
        auto sigma = match(rule.lhs, t);
        if (!sigma) continue;
        any_rule = true;
        Term reduct = apply(*sigma, rule.rhs);
        auto mint = find_mint_subterm(trs, reduct, fuel);
        if (!mint) continue;
        DepPairAlt dp{ri, mint->position};
        // The matched substitution is normal, so a looping subterm cannot sit
        // below a variable position of the rhs.
        if (!is_dep_pair_alt(trs, dp)) {
            return Failure{FailureKind::InvalidDepPair, dp.to_string() + " selected for " + t.to_string()};
        }
        return DpAndSub{dp, std::move(*sigma), subterm_at(reduct, mint->position)};
    }
    if (!any_rule) return Failure{FailureKind::NoRootRule, t.to_string() + " is a normal form"};
    return Failure{FailureKind::NoMintWithinFuel, "no reduct of " + t.to_string() + " has a loop certificate"};
}

Outcome<ChainEntry> next_dp_and_sub(const Trs& trs, const ChainEntry& current, std::size_t fuel) {
    if (!is_dep_pair_alt(trs, current.dp)) return Failure{FailureKind::InvalidDepPair, current.dp.to_string()};
    auto pair = to_standard(trs, current.dp);
    Term lhs = apply(current.sigma, pair.lhs);
    if (!is_nr_normal_form(trs, lhs)) return precondition("nr-normal-form violation: " + lhs.to_string());
    Term mint = apply(current.sigma, pair.rhs_sub);
    if (!detect_innermost_loop(trs, mint, fuel).certificate) {
        return Failure{FailureKind::NoLoopCertificate, mint.to_string()};
    }
    auto nf = normalize(trs, mint, RelationMode::NonRootInnermost, fuel);
    if (!nf.complete) return Failure{FailureKind::FuelExhaustedNormalizing, mint.to_string()};
    auto next = dp_and_sub_from_nrnf(trs, nf.normal_form(), fuel);
    if (!next) return next.failure();
    ChainEntry entry{next->dp, next->sigma};
    auto link = check_chained(trs, current, entry, true, fuel);
    if (!link.verified()) {
        return Failure{FailureKind::ChainCheckFailed, current.dp.to_string() + " -> " + entry.dp.to_string()};
    }
    return entry;
}

Outcome<ChainWitness> chain_from_loop(const Trs& trs, const LoopCertificate& cert, std::size_t length,
                                      std::size_t fuel) {
    if (length == 0) return precondition("chain length must be at least 1");
    if (!is_valid_certificate(trs, cert)) return precondition("loop certificate does not replay");
    auto mint = find_mint_subterm(trs, cert.start(), fuel);
    if (!mint) return Failure{FailureKind::NoMintWithinFuel, cert.start().to_string()};
    auto nf = normalize(trs, subterm_at(cert.start(), mint->position), RelationMode::NonRootInnermost, fuel);
    if (!nf.complete) return Failure{FailureKind::FuelExhaustedNormalizing, nf.trace.start.to_string()};
    auto seed = dp_and_sub_from_nrnf(trs, nf.normal_form(), fuel);
    if (!seed) return seed.failure();

    ChainWitness w;
    w.entries.push_back(ChainEntry{seed->dp, seed->sigma});
    while (w.size() < length) {
        auto next = next_dp_and_sub(trs, w.entries.back(), fuel);
        if (!next) return next.failure();
        w.entries.push_back(std::move(next.value()));
    }
    auto verdict = verify_chain_prefix(trs, w, true, fuel);
    if (!verdict.verified()) {
        return Failure{FailureKind::ChainCheckFailed, "constructed witness fails at link " +
                                                          std::to_string(verdict.failed_link.value_or(0))};
    }
    return w;
}

}  // namespace rdp
