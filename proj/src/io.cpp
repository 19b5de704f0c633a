#include "rdp/io.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "rdp/error.hpp"

namespace rdp {

namespace {

struct Token {
    enum Kind { Ident, LParen, RParen, Comma, Arrow, End } kind;
    std::string text;
    std::size_t line;
};

class Lexer {
public:
    explicit Lexer(const std::string& text) : text_(text) {}

    const Token& peek() {
        if (!ahead_) ahead_ = scan();
        return *ahead_;
    }
    Token next() {
        Token t = peek();
        ahead_.reset();
        return t;
    }
    Token expect(Token::Kind kind, const char* what) {
        Token t = next();
        if (t.kind != kind) throw ParseError(t.line, std::string("expected ") + what + ", found " + describe(t));
        return t;
    }

    static std::string describe(const Token& t) {
        switch (t.kind) {
            case Token::Ident: return "'" + t.text + "'";
            case Token::LParen: return "'('";
            case Token::RParen: return "')'";
            case Token::Comma: return "','";
            case Token::Arrow: return "'->'";
            case Token::End: return "end of input";
        }
        return "?";
    }

private:
    static bool is_delim(char c) {
        return std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' || c == ',';
    }

    Token scan() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '\n') ++line_;
            if (!std::isspace(static_cast<unsigned char>(c))) break;
            ++pos_;
        }
        if (pos_ == text_.size()) return {Token::End, "", line_};
        char c = text_[pos_];
        if (c == '(') return ++pos_, Token{Token::LParen, "(", line_};
        if (c == ')') return ++pos_, Token{Token::RParen, ")", line_};
        if (c == ',') return ++pos_, Token{Token::Comma, ",", line_};
        if (text_.compare(pos_, 2, "->") == 0) return pos_ += 2, Token{Token::Arrow, "->", line_};
        std::size_t start = pos_;
        while (pos_ < text_.size() && !is_delim(text_[pos_]) && text_.compare(pos_, 2, "->") != 0) ++pos_;
        std::string word = text_.substr(start, pos_ - start);
        if (word.find('#') != std::string::npos) {
            throw ParseError(line_, "'#' is reserved for generated variable names: " + word);
        }
        return {Token::Ident, std::move(word), line_};
    }

    const std::string& text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::optional<Token> ahead_;
};

Term parse_term_tokens(Lexer& lex, const std::set<Variable>& vars, Signature& sig) {
    Token head = lex.expect(Token::Ident, "a term");
    std::vector<Term> args;
    bool parens = lex.peek().kind == Token::LParen;
    if (parens) {
        lex.next();
        if (lex.peek().kind != Token::RParen) {
            while (true) {
                args.push_back(parse_term_tokens(lex, vars, sig));
                Token t = lex.next();
                if (t.kind == Token::RParen) break;
                if (t.kind != Token::Comma) throw ParseError(t.line, "expected ',' or ')', found " + Lexer::describe(t));
            }
        } else {
            lex.next();
        }
    }
    if (vars.count(Variable{head.text})) {
        if (parens) throw ParseError(head.line, "variable '" + head.text + "' applied to arguments");
        return Term::var(head.text);
    }
    Symbol f{head.text, args.size()};
    try {
        sig.add(f);
    } catch (const ArityMismatch& e) {
        throw ParseError(head.line, e.what());
    }
    return Term::app(std::move(f), std::move(args));
}

void skip_balanced(Lexer& lex) {
    std::size_t depth = 1;
    while (depth > 0) {
        Token t = lex.next();
        if (t.kind == Token::End) throw ParseError(t.line, "unterminated section");
        if (t.kind == Token::LParen) ++depth;
        if (t.kind == Token::RParen) --depth;
    }
}

void collect_symbols(const Term& t, std::vector<Symbol>& out) {
    if (t.is_var()) return;
    out.push_back(t.symbol());
    for (const auto& a : t.args()) collect_symbols(a, out);
}

}  // namespace

Trs parse_trs(const std::string& text) {
    Lexer lex(text);
    std::set<Variable> vars;
    Signature sig;
    std::vector<std::pair<Term, Term>> rules;
    bool seen_rules = false;
    while (lex.peek().kind != Token::End) {
        lex.expect(Token::LParen, "'('");
        Token kw = lex.expect(Token::Ident, "a section name");
        if (kw.text == "VAR") {
            if (seen_rules) throw ParseError(kw.line, "VAR section after RULES");
            while (lex.peek().kind == Token::Ident) vars.insert(Variable{lex.next().text});
            lex.expect(Token::RParen, "')' closing VAR");
        } else if (kw.text == "RULES") {
            seen_rules = true;
            while (lex.peek().kind != Token::RParen) {
                if (lex.peek().kind == Token::End) throw ParseError(lex.peek().line, "unterminated RULES section");
                Term lhs = parse_term_tokens(lex, vars, sig);
                lex.expect(Token::Arrow, "'->'");
                Term rhs = parse_term_tokens(lex, vars, sig);
                rules.emplace_back(std::move(lhs), std::move(rhs));
            }
            lex.next();
        } else if (kw.text == "COMMENT") {
            skip_balanced(lex);
        } else {
            throw ParseError(kw.line, "unknown section '" + kw.text + "'");
        }
    }
    return Trs(std::move(sig), std::move(vars), std::move(rules));
}

std::string print_trs(const Trs& trs) {
    std::ostringstream out;
    out << "(VAR";
    for (const auto& x : trs.variables()) out << ' ' << x.name;
    out << ")\n(RULES\n";
    for (const auto& r : trs.rules()) out << "  " << r.to_string() << '\n';
    out << ")\n";
    return out.str();
}

Term parse_term(const std::string& text, const std::set<Variable>& variables) {
    Lexer lex(text);
    Signature sig;
    Term t = parse_term_tokens(lex, variables, sig);
    if (lex.peek().kind != Token::End) {
        throw ParseError(lex.peek().line, "trailing input after term: " + Lexer::describe(lex.peek()));
    }
    return t;
}

Term parse_query_term(const std::string& text, Trs& trs) {
    Term t = parse_term(text, trs.variables());
    std::vector<Symbol> syms;
    collect_symbols(t, syms);
    for (const auto& f : syms) {
        auto arity = trs.signature().arity_of(f.name);
        if (!arity) {
            trs.extend_signature(f);
        } else if (*arity != f.arity) {
            throw ParseError(0, "symbol '" + f.name + "' has arity " + std::to_string(*arity) + " in the TRS");
        }
    }
    return t;
}

// ---------------------------------------------------------------------------
// JSON

json position_to_json(const Position& p) { return p.to_string(); }

Position position_from_json(const json& j) {
    if (!j.is_string()) throw ParseError(0, "position must be a string");
    try {
        return Position::parse(j.get<std::string>());
    } catch (const Error& e) {
        throw ParseError(0, e.what());
    }
}

json substitution_to_json(const Substitution& sigma) {
    json j = json::object();
    for (const auto& [x, t] : sigma.bindings()) j[x.name] = t.to_string();
    return j;
}

Substitution substitution_from_json(const json& j, const Trs& trs) {
    if (!j.is_object()) throw ParseError(0, "substitution must be an object");
    Substitution sigma;
    for (const auto& [name, value] : j.items()) {
        if (!value.is_string()) throw ParseError(0, "binding of '" + name + "' must be a term string");
        if (trs.signature().contains(name)) throw ParseError(0, "'" + name + "' is a function symbol");
        Term t = parse_term(value.get<std::string>(), trs.variables());
        std::vector<Symbol> syms;
        collect_symbols(t, syms);
        for (const auto& f : syms) {
            auto arity = trs.signature().arity_of(f.name);
            if (arity && *arity != f.arity) {
                throw ParseError(0, "symbol '" + f.name + "' has arity " + std::to_string(*arity) + " in the TRS");
            }
        }
        sigma.bind(Variable{name}, t);
    }
    return sigma;
}

json witness_to_json(const ChainWitness& w) {
    json entries = json::array();
    for (const auto& e : w.entries) {
        entries.push_back({{"rule", e.dp.rule_index},
                           {"position", position_to_json(e.dp.position)},
                           {"substitution", substitution_to_json(e.sigma)}});
    }
    return {{"entries", entries}};
}

ChainWitness witness_from_json(const json& j, const Trs& trs) {
    if (!j.is_object() || !j.contains("entries") || !j["entries"].is_array()) {
        throw ParseError(0, "witness must be an object with an \"entries\" array");
    }
    ChainWitness w;
    std::size_t i = 0;
    for (const auto& e : j["entries"]) {
        if (!e.is_object() || !e.contains("rule") || !e["rule"].is_number_unsigned() || !e.contains("position")) {
            throw ParseError(0, "entry " + std::to_string(i) + " needs \"rule\" and \"position\"");
        }
        DepPairAlt dp{e["rule"].get<std::size_t>(), position_from_json(e["position"])};
        if (!is_dep_pair_alt(trs, dp)) {
            throw InvalidDepPair(i, dp.to_string() + " is not a dependency pair of the TRS");
        }
        Substitution sigma = e.contains("substitution") ? substitution_from_json(e["substitution"], trs) : Substitution{};
        w.entries.push_back(ChainEntry{std::move(dp), std::move(sigma)});
        ++i;
    }
    return w;
}

ChainWitness parse_chain_witness(const std::string& text, const Trs& trs) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(0, e.what());
    }
    return witness_from_json(j, trs);
}

json trace_to_json(const DerivationTrace& tr) {
    json steps = json::array();
    for (const auto& s : tr.steps) {
        steps.push_back({{"position", position_to_json(s.position)},
                         {"rule_index", s.rule_index},
                         {"substitution", substitution_to_json(s.substitution)},
                         {"term", s.result.to_string()}});
    }
    return {{"start", tr.start.to_string()}, {"mode", to_string(tr.mode)}, {"steps", steps}};
}

DerivationTrace trace_from_json(const json& j, const Trs& trs) {
    try {
        auto mode = parse_relation_mode(j.at("mode").get<std::string>());
        if (!mode) throw ParseError(0, "unknown relation mode " + j.at("mode").dump());
        DerivationTrace tr{parse_term(j.at("start").get<std::string>(), trs.variables()), {}, *mode};
        for (const auto& s : j.at("steps")) {
            tr.steps.push_back(Step{position_from_json(s.at("position")), s.at("rule_index").get<std::size_t>(),
                                    substitution_from_json(s.at("substitution"), trs),
                                    parse_term(s.at("term").get<std::string>(), trs.variables())});
        }
        return tr;
    } catch (const json::exception& e) {
        throw ParseError(0, std::string("malformed trace: ") + e.what());
    }
}

// ---------------------------------------------------------------------------
// PVS0 programs

namespace {

using pvs0::Expr;
using pvs0::Guard;

const std::map<std::string, Guard::Op>& guard_ops() {
    static const std::map<std::string, Guard::Op> ops = {
        {"arg", Guard::Op::Arg}, {"comp", Guard::Op::Comp}, {"nat", Guard::Op::Nat},  {"add", Guard::Op::Add},
        {"monus", Guard::Op::Monus}, {"lt", Guard::Op::Lt}, {"gt", Guard::Op::Gt},    {"eq", Guard::Op::Eq},
        {"and", Guard::Op::And},   {"or", Guard::Op::Or},   {"not", Guard::Op::Not},  {"if", Guard::Op::If},
        {"tuple", Guard::Op::Tuple}, {"top", Guard::Op::Top}, {"bot", Guard::Op::Bot},
    };
    return ops;
}

std::uint64_t natural(const json& j, const char* what) {
    if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0)) {
        throw ParseError(0, std::string(what) + " must be a natural number, got " + j.dump());
    }
    return j.get<std::uint64_t>();
}

void expect_arity(const json& j, std::size_t n) {
    if (j.size() != n) throw ParseError(0, "'" + j[0].get<std::string>() + "' expects " + std::to_string(n - 1) +
                                               " operands: " + j.dump());
}

pvs0::Value value_from_json(const json& j, const char* what) {
    if (!j.is_array()) throw ParseError(0, std::string(what) + " must be an array of naturals");
    pvs0::Value v;
    for (const auto& c : j) v.push_back(natural(c, what));
    return v;
}

}  // namespace

json guard_to_json(const Guard& g) {
    std::string name;
    for (const auto& [n, op] : guard_ops()) {
        if (op == g.op()) name = n;
    }
    json j = json::array({name});
    switch (g.op()) {
        case Guard::Op::Arg:
        case Guard::Op::Nat: j.push_back(g.a()); break;
        case Guard::Op::Comp:
            j.push_back(g.a());
            j.push_back(g.b());
            break;
        default:
            for (const auto& k : g.kids()) j.push_back(guard_to_json(k));
    }
    return j;
}

Guard guard_from_json(const json& j) {
    if (!j.is_array() || j.empty() || !j[0].is_string()) throw ParseError(0, "guard must be [\"op\", ...]: " + j.dump());
    auto it = guard_ops().find(j[0].get<std::string>());
    if (it == guard_ops().end()) throw ParseError(0, "unknown guard operator " + j[0].dump());
    auto sub = [&](std::size_t i) { return guard_from_json(j[i]); };
    switch (it->second) {
        case Guard::Op::Arg: expect_arity(j, 2); return Guard::arg(natural(j[1], "arg index"));
        case Guard::Op::Comp:
            expect_arity(j, 3);
            return Guard::comp(natural(j[1], "comp argument"), natural(j[2], "comp index"));
        case Guard::Op::Nat: expect_arity(j, 2); return Guard::nat(natural(j[1], "nat"));
        case Guard::Op::Add: expect_arity(j, 3); return Guard::add(sub(1), sub(2));
        case Guard::Op::Monus: expect_arity(j, 3); return Guard::monus(sub(1), sub(2));
        case Guard::Op::Lt: expect_arity(j, 3); return Guard::lt(sub(1), sub(2));
        case Guard::Op::Gt: expect_arity(j, 3); return Guard::gt(sub(1), sub(2));
        case Guard::Op::Eq: expect_arity(j, 3); return Guard::eq(sub(1), sub(2));
        case Guard::Op::And: expect_arity(j, 3); return Guard::and_(sub(1), sub(2));
        case Guard::Op::Or: expect_arity(j, 3); return Guard::or_(sub(1), sub(2));
        case Guard::Op::Not: expect_arity(j, 2); return Guard::not_(sub(1));
        case Guard::Op::If: expect_arity(j, 4); return Guard::if_(sub(1), sub(2), sub(3));
        case Guard::Op::Tuple: {
            std::vector<Guard> items;
            for (std::size_t i = 1; i < j.size(); ++i) items.push_back(sub(i));
            return Guard::tuple(std::move(items));
        }
        case Guard::Op::Top: expect_arity(j, 1); return Guard::top();
        case Guard::Op::Bot: expect_arity(j, 1); return Guard::bot();
    }
    throw ParseError(0, "unreachable guard operator");
}

json expr_to_json(const Expr& e) {
    switch (e.kind()) {
        case Expr::Kind::Cnst: return json::array({"cnst", e.value()});
        case Expr::Kind::Vr: return json::array({"vr"});
        case Expr::Kind::Op1: return json::array({"op1", e.index(), expr_to_json(e.kid(1))});
        case Expr::Kind::Op2: return json::array({"op2", e.index(), expr_to_json(e.kid(1)), expr_to_json(e.kid(2))});
        case Expr::Kind::Rec: return json::array({"rec", expr_to_json(e.kid(1))});
        case Expr::Kind::Ite:
            return json::array({"ite", expr_to_json(e.kid(1)), expr_to_json(e.kid(2)), expr_to_json(e.kid(3))});
    }
    return nullptr;
}

Expr expr_from_json(const json& j) {
    if (!j.is_array() || j.empty() || !j[0].is_string()) {
        throw ParseError(0, "expression must be [\"kind\", ...]: " + j.dump());
    }
    const auto kind = j[0].get<std::string>();
    if (kind == "cnst") {
        expect_arity(j, 2);
        return Expr::cnst(value_from_json(j[1], "constant"));
    }
    if (kind == "vr") {
        expect_arity(j, 1);
        return Expr::vr();
    }
    if (kind == "op1") {
        expect_arity(j, 3);
        return Expr::op1(natural(j[1], "operator index"), expr_from_json(j[2]));
    }
    if (kind == "op2") {
        expect_arity(j, 4);
        return Expr::op2(natural(j[1], "operator index"), expr_from_json(j[2]), expr_from_json(j[3]));
    }
    if (kind == "rec") {
        expect_arity(j, 2);
        return Expr::rec(expr_from_json(j[1]));
    }
    if (kind == "ite") {
        expect_arity(j, 4);
        return Expr::ite(expr_from_json(j[1]), expr_from_json(j[2]), expr_from_json(j[3]));
    }
    throw ParseError(0, "unknown expression kind '" + kind + "'");
}

json program_to_json(const pvs0::Program& p) {
    json o1 = json::array(), o2 = json::array();
    for (const auto& d : p.o1) o1.push_back(guard_to_json(d.body));
    for (const auto& d : p.o2) o2.push_back(guard_to_json(d.body));
    return {{"width", p.width}, {"false_val", p.false_val}, {"top_val", p.top_val},
            {"O1", o1},         {"O2", o2},                 {"body", expr_to_json(p.body)}};
}

pvs0::Program program_from_json(const json& j) {
    if (!j.is_object()) throw ParseError(0, "program must be a JSON object");
    for (const char* key : {"width", "false_val", "top_val", "O1", "O2", "body"}) {
        if (!j.contains(key)) throw ParseError(0, std::string("program lacks \"") + key + "\"");
    }
    pvs0::Program p;
    p.width = natural(j["width"], "width");
    p.false_val = value_from_json(j["false_val"], "false_val");
    p.top_val = value_from_json(j["top_val"], "top_val");
    if (!j["O1"].is_array() || !j["O2"].is_array()) throw ParseError(0, "O1 and O2 must be arrays");
    for (const auto& g : j["O1"]) p.o1.push_back({1, guard_from_json(g)});
    for (const auto& g : j["O2"]) p.o2.push_back({2, guard_from_json(g)});
    p.body = expr_from_json(j["body"]);
    p.validate();
    return p;
}

pvs0::Program parse_pvs0_program(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(0, e.what());
    }
    return program_from_json(j);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace rdp
