#include "rdp/pvs0.hpp"

#include <algorithm>
#include <charconv>
#include <limits>

#include "rdp/error.hpp"

namespace rdp::pvs0 {

std::string to_string(const Value& v) {
    std::string out = "(";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(v[i]);
    }
    return out + ")";
}

Value parse_value(const std::string& text) {
    std::string s;
    for (char c : text) {
        if (c != '(' && c != ')' && c != ' ') s += c;
    }
    Value out;
    std::size_t start = 0;
    while (true) {
        auto comma = s.find(',', start);
        auto piece = s.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        std::uint64_t n = 0;
        auto [ptr, ec] = std::from_chars(piece.data(), piece.data() + piece.size(), n);
        if (piece.empty() || ec != std::errc{} || ptr != piece.data() + piece.size()) {
            throw ParseError(0, "bad value component '" + piece + "' in '" + text + "'");
        }
        out.push_back(n);
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Guards

Guard Guard::arg(std::size_t i) { return Guard(Op::Arg, i, 0, {}); }
Guard Guard::comp(std::size_t i, std::size_t k) { return Guard(Op::Comp, i, k, {}); }
Guard Guard::nat(std::uint64_t c) { return Guard(Op::Nat, c, 0, {}); }
Guard Guard::add(Guard a, Guard b) { return Guard(Op::Add, 0, 0, {std::move(a), std::move(b)}); }
Guard Guard::monus(Guard a, Guard b) { return Guard(Op::Monus, 0, 0, {std::move(a), std::move(b)}); }
Guard Guard::lt(Guard a, Guard b) { return Guard(Op::Lt, 0, 0, {std::move(a), std::move(b)}); }
Guard Guard::gt(Guard a, Guard b) { return Guard(Op::Gt, 0, 0, {std::move(a), std::move(b)}); }
Guard Guard::eq(Guard a, Guard b) { return Guard(Op::Eq, 0, 0, {std::move(a), std::move(b)}); }
Guard Guard::and_(Guard a, Guard b) { return Guard(Op::And, 0, 0, {std::move(a), std::move(b)}); }
Guard Guard::or_(Guard a, Guard b) { return Guard(Op::Or, 0, 0, {std::move(a), std::move(b)}); }
Guard Guard::not_(Guard a) { return Guard(Op::Not, 0, 0, {std::move(a)}); }
Guard Guard::if_(Guard c, Guard t, Guard e) {
    return Guard(Op::If, 0, 0, {std::move(c), std::move(t), std::move(e)});
}
Guard Guard::tuple(std::vector<Guard> items) { return Guard(Op::Tuple, 0, 0, std::move(items)); }
Guard Guard::top() { return Guard(Op::Top, 0, 0, {}); }
Guard Guard::bot() { return Guard(Op::Bot, 0, 0, {}); }

namespace {

const char* op_name(Guard::Op op) {
    switch (op) {
        case Guard::Op::Arg: return "arg";
        case Guard::Op::Comp: return "comp";
        case Guard::Op::Nat: return "nat";
        case Guard::Op::Add: return "add";
        case Guard::Op::Monus: return "monus";
        case Guard::Op::Lt: return "lt";
        case Guard::Op::Gt: return "gt";
        case Guard::Op::Eq: return "eq";
        case Guard::Op::And: return "and";
        case Guard::Op::Or: return "or";
        case Guard::Op::Not: return "not";
        case Guard::Op::If: return "if";
        case Guard::Op::Tuple: return "tuple";
        case Guard::Op::Top: return "top";
        case Guard::Op::Bot: return "bot";
    }
    return "?";
}

void expect_sort(const Guard& g, Sort want, Sort got) {
    if (want != got) throw ParseError(0, std::string("ill-typed operand of '") + op_name(g.op()) + "'");
}

}  // namespace

Sort Guard::check(std::size_t arity, std::size_t width) const {
    auto sort_of = [&](std::size_t i) { return kids_[i].check(arity, width); };
    switch (op_) {
        case Op::Arg:
            if (a_ >= arity) throw ParseError(0, "arg " + std::to_string(a_) + " exceeds operator arity");
            return Sort::Tuple;
        case Op::Comp:
            if (a_ >= arity) throw ParseError(0, "comp argument " + std::to_string(a_) + " exceeds operator arity");
            if (b_ >= width) throw ParseError(0, "comp index " + std::to_string(b_) + " exceeds width");
            return Sort::Nat;
        case Op::Nat: return Sort::Nat;
        case Op::Add:
        case Op::Monus:
            expect_sort(*this, Sort::Nat, sort_of(0));
            expect_sort(*this, Sort::Nat, sort_of(1));
            return Sort::Nat;
        case Op::Lt:
        case Op::Gt:
        case Op::Eq:
            expect_sort(*this, Sort::Nat, sort_of(0));
            expect_sort(*this, Sort::Nat, sort_of(1));
            return Sort::Bool;
        case Op::And:
        case Op::Or:
            expect_sort(*this, Sort::Bool, sort_of(0));
            expect_sort(*this, Sort::Bool, sort_of(1));
            return Sort::Bool;
        case Op::Not:
            expect_sort(*this, Sort::Bool, sort_of(0));
            return Sort::Bool;
        case Op::If: {
            expect_sort(*this, Sort::Bool, sort_of(0));
            auto s = sort_of(1);
            expect_sort(*this, s, sort_of(2));
            return s;
        }
        case Op::Tuple:
            if (kids_.size() != width) {
                throw ParseError(0, "tuple of " + std::to_string(kids_.size()) + " components, width is " +
                                        std::to_string(width));
            }
            for (std::size_t i = 0; i < kids_.size(); ++i) expect_sort(*this, Sort::Nat, sort_of(i));
            return Sort::Tuple;
        case Op::Top:
        case Op::Bot: return Sort::Tuple;
    }
    return Sort::Tuple;
}

std::string Guard::to_string() const {
    std::string out = op_name(op_);
    switch (op_) {
        case Op::Arg: return out + "(" + std::to_string(a_) + ")";
        case Op::Comp: return out + "(" + std::to_string(a_) + "," + std::to_string(b_) + ")";
        case Op::Nat: return std::to_string(a_);
        case Op::Top:
        case Op::Bot: return out;
        default: break;
    }
    out += '(';
    for (std::size_t i = 0; i < kids_.size(); ++i) {
        if (i) out += ',';
        out += kids_[i].to_string();
    }
    return out + ')';
}

namespace {

struct GuardEnv {
    const Program& p;
    std::span<const Value> args;
};

bool eval_bool(const Guard& g, const GuardEnv& env);
Value eval_tuple(const Guard& g, const GuardEnv& env);

std::uint64_t eval_nat(const Guard& g, const GuardEnv& env) {
    const auto& k = g.kids();
    switch (g.op()) {
        case Guard::Op::Comp: return env.args[g.a()][g.b()];
        case Guard::Op::Nat: return g.a();
        case Guard::Op::Add: {
            auto x = eval_nat(k[0], env);
            auto y = eval_nat(k[1], env);
            return x > std::numeric_limits<std::uint64_t>::max() - y ? std::numeric_limits<std::uint64_t>::max()
                                                                      : x + y;
        }
        case Guard::Op::Monus: {
            auto x = eval_nat(k[0], env);
            auto y = eval_nat(k[1], env);
            return x > y ? x - y : 0;
        }
        case Guard::Op::If: return eval_bool(k[0], env) ? eval_nat(k[1], env) : eval_nat(k[2], env);
        default: throw Error(std::string("'") + op_name(g.op()) + "' is not a natural");
    }
}

bool eval_bool(const Guard& g, const GuardEnv& env) {
    const auto& k = g.kids();
    switch (g.op()) {
        case Guard::Op::Lt: return eval_nat(k[0], env) < eval_nat(k[1], env);
        case Guard::Op::Gt: return eval_nat(k[0], env) > eval_nat(k[1], env);
        case Guard::Op::Eq: return eval_nat(k[0], env) == eval_nat(k[1], env);
        case Guard::Op::And: return eval_bool(k[0], env) && eval_bool(k[1], env);
        case Guard::Op::Or: return eval_bool(k[0], env) || eval_bool(k[1], env);
        case Guard::Op::Not: return !eval_bool(k[0], env);
        case Guard::Op::If: return eval_bool(k[0], env) ? eval_bool(k[1], env) : eval_bool(k[2], env);
        default: throw Error(std::string("'") + op_name(g.op()) + "' is not a condition");
    }
}

Value eval_tuple(const Guard& g, const GuardEnv& env) {
    const auto& k = g.kids();
    switch (g.op()) {
        case Guard::Op::Arg: return env.args[g.a()];
        case Guard::Op::Top: return env.p.top_val;
        case Guard::Op::Bot: return env.p.false_val;
        case Guard::Op::If: return eval_bool(k[0], env) ? eval_tuple(k[1], env) : eval_tuple(k[2], env);
        case Guard::Op::Tuple: {
            Value v;
            v.reserve(k.size());
            for (const auto& item : k) v.push_back(eval_nat(item, env));
            return v;
        }
        default: throw Error(std::string("'") + op_name(g.op()) + "' is not a tuple");
    }
}

}  // namespace

Value guard_eval(const Program& p, const OperatorDef& def, std::span<const Value> args) {
    if (args.size() != def.arity) {
        throw ArityMismatch("operator of arity " + std::to_string(def.arity) + " applied to " +
                            std::to_string(args.size()) + " arguments");
    }
    for (const auto& a : args) {
        if (a.size() != p.width) {
            throw WidthMismatch("argument " + to_string(a) + " has width " + std::to_string(a.size()) +
                                ", program width is " + std::to_string(p.width));
        }
    }
    return eval_tuple(def.body, GuardEnv{p, args});
}

// ---------------------------------------------------------------------------
// Expressions

Expr Expr::cnst(Value v) { return Expr(Kind::Cnst, 0, std::move(v), {}); }
Expr Expr::vr() { return Expr(Kind::Vr, 0, {}, {}); }
Expr Expr::op1(std::size_t j, Expr e) { return Expr(Kind::Op1, j, {}, {std::move(e)}); }
Expr Expr::op2(std::size_t j, Expr e1, Expr e2) { return Expr(Kind::Op2, j, {}, {std::move(e1), std::move(e2)}); }
Expr Expr::rec(Expr e) { return Expr(Kind::Rec, 0, {}, {std::move(e)}); }
Expr Expr::ite(Expr c, Expr t, Expr e) { return Expr(Kind::Ite, 0, {}, {std::move(c), std::move(t), std::move(e)}); }

std::size_t Expr::size() const {
    std::size_t n = 1;
    for (const auto& k : kids_) n += k.size();
    return n;
}

std::string Expr::to_string() const {
    std::string out;
    switch (kind_) {
        case Kind::Cnst: return "cnst" + pvs0::to_string(value_);
        case Kind::Vr: return "vr";
        case Kind::Op1: out = "op1(" + std::to_string(index_) + ","; break;
        case Kind::Op2: out = "op2(" + std::to_string(index_) + ","; break;
        case Kind::Rec: out = "rec("; break;
        case Kind::Ite: out = "ite("; break;
    }
    for (std::size_t i = 0; i < kids_.size(); ++i) {
        if (i) out += ',';
        out += kids_[i].to_string();
    }
    return out + ")";
}

namespace {

void check_constants(const Expr& e, std::size_t width) {
    if (e.kind() == Expr::Kind::Cnst && e.value().size() != width) {
        throw WidthMismatch("constant " + to_string(e.value()) + " does not have width " + std::to_string(width));
    }
    for (const auto& k : e.kids()) check_constants(k, width);
}

}  // namespace

void Program::validate() const {
    if (width == 0) throw WidthMismatch("program width must be at least 1");
    if (false_val.size() != width) {
        throw WidthMismatch("false value " + to_string(false_val) + " does not have width " + std::to_string(width));
    }
    if (top_val.size() != width) {
        throw WidthMismatch("top value " + to_string(top_val) + " does not have width " + std::to_string(width));
    }
    if (top_val == false_val) throw ParseError(0, "top value coincides with the false value");
    for (const auto* ops : {&o1, &o2}) {
        std::size_t arity = ops == &o1 ? 1 : 2;
        for (std::size_t j = 0; j < ops->size(); ++j) {
            const auto& def = (*ops)[j];
            if (def.arity != arity) throw ArityMismatch("operator " + std::to_string(j) + " has the wrong arity");
            if (def.body.check(arity, width) != Sort::Tuple) {
                throw ParseError(0, "operator body " + def.body.to_string() + " does not yield a tuple");
            }
        }
    }
    check_constants(body, width);
}

Program ackermann_program() {
    using G = Guard;
    const auto m = G::comp(0, 0);
    const auto n = G::comp(0, 1);
    Program p;
    p.width = 2;
    p.false_val = {0, 0};
    p.top_val = {1, 0};
    p.o1 = {
        {1, G::if_(G::eq(m, G::nat(0)), G::top(), G::bot())},
        {1, G::if_(G::eq(n, G::nat(0)), G::top(), G::bot())},
        {1, G::tuple({G::add(n, G::nat(1)), G::nat(0)})},
        {1, G::if_(G::gt(m, G::nat(0)), G::tuple({G::monus(m, G::nat(1)), G::nat(1)}), G::bot())},
        {1, G::if_(G::gt(n, G::nat(0)), G::tuple({m, G::monus(n, G::nat(1))}), G::bot())},
    };
    p.o2 = {
        {2, G::if_(G::gt(m, G::nat(0)), G::tuple({G::monus(m, G::nat(1)), G::comp(1, 0)}), G::bot())},
    };
    using E = Expr;
    p.body = E::ite(E::op1(0, E::vr()), E::op1(2, E::vr()),
                    E::ite(E::op1(1, E::vr()), E::rec(E::op1(3, E::vr())),
                           E::rec(E::op2(0, E::vr(), E::rec(E::op1(4, E::vr()))))));
    return p;
}

std::optional<Value> chi_eval(const Program& p, const Expr& expr, const Value& input, std::size_t fuel) {
    const Expr* e = &expr;
    Value v = input;
    // rec and ite continue in tail position, so long recursions use constant stack.
    while (true) {
        if (fuel == 0) return std::nullopt;
        switch (e->kind()) {
            case Expr::Kind::Cnst: return e->value();
            case Expr::Kind::Vr: return v;
            case Expr::Kind::Op1: {
                if (e->index() >= p.o1.size()) return std::nullopt;
                auto a = chi_eval(p, e->kid(1), v, fuel);
                if (!a) return std::nullopt;
                return guard_eval(p, p.o1[e->index()], std::span<const Value>(&*a, 1));
            }
            case Expr::Kind::Op2: {
                if (e->index() >= p.o2.size()) return std::nullopt;
                auto a = chi_eval(p, e->kid(1), v, fuel);
                if (!a) return std::nullopt;
                auto b = chi_eval(p, e->kid(2), v, fuel);
                if (!b) return std::nullopt;
                const Value args[2] = {std::move(*a), std::move(*b)};
                return guard_eval(p, p.o2[e->index()], args);
            }
            case Expr::Kind::Rec: {
                auto a = chi_eval(p, e->kid(1), v, fuel);
                if (!a) return std::nullopt;
                v = std::move(*a);
                e = &p.body;
                --fuel;
                continue;
            }
            case Expr::Kind::Ite: {
                auto c = chi_eval(p, e->kid(1), v, fuel);
                if (!c) return std::nullopt;
                e = *c != p.false_val ? &e->kid(2) : &e->kid(3);
                continue;
            }
        }
    }
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::Holds: return "holds";
        case Verdict::Refuted: return "refuted";
        case Verdict::UnknownWithinFuel: return "unknown-within-fuel";
    }
    return "?";
}

std::optional<std::size_t> least_fuel(const Program& p, const Expr& e, const Value& v, std::size_t max_fuel) {
    if (!chi_eval(p, e, v, max_fuel)) return std::nullopt;
    // χ is monotone in the fuel, so the defined region is an upward-closed interval.
    std::size_t lo = 1, hi = max_fuel;
    while (lo < hi) {
        auto mid = lo + (hi - lo) / 2;
        if (chi_eval(p, e, v, mid)) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    return lo;
}

EpsilonResult epsilon_check(const Program& p, const Expr& e, const Value& v_in, const Value& v_out,
                            std::size_t max_fuel) {
    EpsilonResult r;
    r.fuel = least_fuel(p, e, v_in, max_fuel);
    if (!r.fuel) return r;
    r.observed = chi_eval(p, e, v_in, *r.fuel);
    r.verdict = *r.observed == v_out ? Verdict::Holds : Verdict::Refuted;
    return r;
}

std::optional<std::size_t> terminates_on(const Program& p, const Value& v, std::size_t max_fuel) {
    return least_fuel(p, p.body, v, max_fuel);
}

// ---------------------------------------------------------------------------
// Calling contexts

namespace {

void collect_contexts(const Expr& e, std::vector<std::size_t>& path, std::vector<std::pair<Expr, bool>>& guards,
                      std::vector<CallingContext>& out) {
    if (e.kind() == Expr::Kind::Rec) out.push_back(CallingContext{Position(path), guards, e.kid(1)});
    for (std::size_t i = 1; i <= e.kids().size(); ++i) {
        bool guarded = e.kind() == Expr::Kind::Ite && i > 1;
        if (guarded) guards.emplace_back(e.kid(1), i == 2);
        path.push_back(i);
        collect_contexts(e.kid(i), path, guards, out);
        path.pop_back();
        if (guarded) guards.pop_back();
    }
}

}  // namespace

std::vector<CallingContext> calling_contexts(const Program& p) {
    std::vector<CallingContext> out;
    std::vector<std::size_t> path;
    std::vector<std::pair<Expr, bool>> guards;
    collect_contexts(p.body, path, guards, out);
    return out;
}

bool condition_holds(const Program& p, const CallingContext& cc, const Value& v, std::size_t fuel) {
    for (const auto& [guard, polarity] : cc.condition) {
        auto r = chi_eval(p, guard, v, fuel);
        if (!r || (*r != p.false_val) != polarity) return false;
    }
    return true;
}

Encoder peano_encoder(const std::string& root, const std::string& succ, const std::string& zero,
                      std::size_t width) {
    return [=](const Value& v) {
        if (v.size() != width) {
            throw WidthMismatch("cannot encode " + to_string(v) + " with " + root + "/" + std::to_string(width));
        }
        const Term z = Term::app(Symbol{zero, 0});
        std::vector<Term> args;
        for (auto k : v) {
            Term t = z;
            for (std::uint64_t i = 0; i < k; ++i) t = Term::app(Symbol{succ, 1}, {t});
            args.push_back(t);
        }
        return Term::app(Symbol{root, width}, std::move(args));
    };
}

bool CcDpPairReport::passed() const {
    return std::all_of(samples.begin(), samples.end(), [](const CcDpSample& s) { return s.ok(); });
}

bool CcDpReport::passed() const {
    return std::all_of(pairs.begin(), pairs.end(), [](const CcDpPairReport& r) { return r.passed(); });
}

CcDpReport check_cc_dp_correspondence(const Program& p, const Trs& trs, const Encoder& encode,
                                      const std::vector<CcDpPair>& pairs, const std::vector<Value>& samples,
                                      std::size_t fuel) {
    const auto contexts = calling_contexts(p);
    for (const auto& v : samples) {
        if (v.size() != p.width) {
            throw WidthMismatch("sample " + to_string(v) + " does not have width " + std::to_string(p.width));
        }
    }
    CcDpReport report;
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        const auto& pair = pairs[k];
        if (pair.context >= contexts.size()) {
            throw IndexOutOfRange("calling context " + std::to_string(pair.context) + " out of range (" +
                                  std::to_string(contexts.size()) + " contexts)");
        }
        if (!is_dep_pair_alt(trs, pair.dp)) throw InvalidDepPair(k, pair.dp.to_string() + " is not a dependency pair");
        const auto& cc = contexts[pair.context];
        const auto& rule = trs.rule(pair.dp.rule_index);
        const Term& rhs_sub = subterm_at(rule.rhs, pair.dp.position);

        CcDpPairReport pr;
        pr.pair = pair;
        for (const auto& v : samples) {
            CcDpSample s;
            s.sample = v;
            s.condition = condition_holds(p, cc, v, fuel);
            auto sigma = match(rule.lhs, encode(v));
            s.matches = sigma.has_value();
            if (s.condition && s.matches) {
                if (auto actual = chi_eval(p, cc.actual, v, fuel)) {
                    auto nf = normalize(trs, apply(*sigma, rhs_sub), RelationMode::NonRootInnermost, fuel);
                    s.actual_agrees = nf.complete && encode(*actual) == nf.normal_form();
                }
            }
            pr.samples.push_back(std::move(s));
        }
        report.pairs.push_back(std::move(pr));
    }
    return report;
}

}  // namespace rdp::pvs0
