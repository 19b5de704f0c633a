#include "rdp/term.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "rdp/error.hpp"

namespace rdp {

// ---------------------------------------------------------------------------
// Signature

Signature::Signature(std::span<const Symbol> symbols) {
    for (const auto& s : symbols) add(s);
}

void Signature::add(const Symbol& sym) {
    if (sym.name.empty()) throw Error("symbol name must be nonempty");
    auto [it, inserted] = arities_.emplace(sym.name, sym.arity);
    if (!inserted && it->second != sym.arity) {
        throw ArityMismatch("symbol '" + sym.name + "' used with arity " +
                            std::to_string(sym.arity) + " and " +
                            std::to_string(it->second));
    }
}

std::optional<std::size_t> Signature::arity_of(const std::string& name) const {
    auto it = arities_.find(name);
    if (it == arities_.end()) return std::nullopt;
    return it->second;
}

std::vector<Symbol> Signature::symbols() const {
    std::vector<Symbol> out;
    out.reserve(arities_.size());
    for (const auto& [name, arity] : arities_) out.push_back({name, arity});
    return out;
}

// ---------------------------------------------------------------------------
// Position

Position::Position(std::initializer_list<std::size_t> indices)
    : Position(std::vector<std::size_t>(indices)) {}

Position::Position(std::vector<std::size_t> indices) : indices_(std::move(indices)) {
    for (auto i : indices_) {
        if (i == 0) throw InvalidPosition("position indices are 1-based");
    }
}

std::size_t Position::first() const {
    if (indices_.empty()) throw InvalidPosition("root position has no first index");
    return indices_.front();
}

Position Position::child(std::size_t i) const {
    auto idx = indices_;
    idx.push_back(i);
    return Position(std::move(idx));
}

Position Position::tail() const {
    if (indices_.empty()) throw InvalidPosition("root position has no tail");
    return Position(std::vector<std::size_t>(indices_.begin() + 1, indices_.end()));
}

bool Position::is_prefix_of(const Position& other) const {
    return indices_.size() <= other.indices_.size() &&
           std::equal(indices_.begin(), indices_.end(), other.indices_.begin());
}

std::string Position::to_string() const {
    if (indices_.empty()) return "ε";
    std::string out;
    for (std::size_t i = 0; i < indices_.size(); ++i) {
        if (i) out += '.';
        out += std::to_string(indices_[i]);
    }
    return out;
}

Position Position::parse(const std::string& text) {
    if (text.empty() || text == "ε" || text == "e" || text == "eps") return {};
    std::vector<std::size_t> idx;
    std::size_t start = 0;
    while (true) {
        auto dot = text.find('.', start);
        auto piece = text.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        std::size_t value = 0;
        auto [ptr, ec] = std::from_chars(piece.data(), piece.data() + piece.size(), value);
        if (piece.empty() || ec != std::errc() || ptr != piece.data() + piece.size() || value == 0) {
            throw InvalidPosition("malformed position '" + text + "'");
        }
        idx.push_back(value);
        if (dot == std::string::npos) break;
        start = dot + 1;
    }
    return Position(std::move(idx));
}

Position concat_positions(const Position& p1, const Position& p2) {
    auto idx = p1.indices();
    idx.insert(idx.end(), p2.indices().begin(), p2.indices().end());
    return Position(std::move(idx));
}

// ---------------------------------------------------------------------------
// Term

struct Term::Node {
    std::variant<Variable, App> content;
    std::size_t hash = 0;
    std::size_t size = 1;
    std::size_t depth = 1;
};

namespace {

std::size_t mix(std::size_t seed, std::size_t v) {
    return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

}  // namespace

Term Term::var(Variable v) {
    if (v.name.empty()) throw Error("variable name must be nonempty");
    auto node = std::make_shared<Node>();
    node->hash = mix(0x51ed27, std::hash<std::string>{}(v.name));
    node->content = std::move(v);
    return Term(std::move(node));
}

Term Term::app(Symbol f, std::vector<Term> args) {
    if (f.name.empty()) throw Error("symbol name must be nonempty");
    if (args.size() != f.arity) {
        throw ArityMismatch("symbol '" + f.name + "' has arity " + std::to_string(f.arity) +
                            " but was given " + std::to_string(args.size()) + " arguments");
    }
    auto node = std::make_shared<Node>();
    std::size_t h = mix(0xa11ce, std::hash<std::string>{}(f.name));
    h = mix(h, f.arity);
    std::size_t depth = 0;
    for (const auto& a : args) {
        h = mix(h, a.hash());
        node->size += a.size();
        depth = std::max(depth, a.depth());
    }
    node->depth = depth + 1;
    node->hash = h;
    node->content = App{std::move(f), std::move(args)};
    return Term(std::move(node));
}

bool Term::is_var() const { return std::holds_alternative<Variable>(node_->content); }

const Variable& Term::variable() const {
    if (!is_var()) throw NotAnApplication("term " + to_string() + " is not a variable");
    return std::get<Variable>(node_->content);
}

const Symbol& Term::symbol() const {
    if (is_var()) throw NotAnApplication("variable " + to_string() + " has no root symbol");
    return std::get<App>(node_->content).symbol;
}

std::span<const Term> Term::args() const {
    if (is_var()) return {};
    return std::get<App>(node_->content).args;
}

const Term& Term::arg(std::size_t i) const {
    auto a = args();
    if (i == 0 || i > a.size()) {
        throw InvalidPosition("argument " + std::to_string(i) + " out of range in " + to_string());
    }
    return a[i - 1];
}

std::size_t Term::size() const { return node_->size; }
std::size_t Term::depth() const { return node_->depth; }
std::size_t Term::hash() const { return node_->hash; }

namespace {

void print(const Term& t, std::string& out) {
    if (t.is_var()) {
        out += t.variable().name;
        return;
    }
    out += t.symbol().name;
    auto args = t.args();
    if (args.empty()) return;
    out += '(';
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (i) out += ',';
        print(args[i], out);
    }
    out += ')';
}

}  // namespace

std::string Term::to_string() const {
    std::string out;
    print(*this, out);
    return out;
}

bool operator==(const Term& a, const Term& b) {
    if (a.node_ == b.node_) return true;
    if (a.hash() != b.hash() || a.size() != b.size()) return false;
    if (a.is_var() != b.is_var()) return false;
    if (a.is_var()) return a.variable() == b.variable();
    if (a.symbol() != b.symbol()) return false;
    auto xs = a.args();
    auto ys = b.args();
    return std::equal(xs.begin(), xs.end(), ys.begin(), ys.end());
}

std::strong_ordering operator<=>(const Term& a, const Term& b) {
    if (a.node_ == b.node_) return std::strong_ordering::equal;
    // Variables sort before applications.
    if (a.is_var() != b.is_var()) {
        return a.is_var() ? std::strong_ordering::less : std::strong_ordering::greater;
    }
    if (a.is_var()) return a.variable() <=> b.variable();
    if (auto c = a.symbol() <=> b.symbol(); c != 0) return c;
    auto xs = a.args();
    auto ys = b.args();
    return std::lexicographical_compare_three_way(xs.begin(), xs.end(), ys.begin(), ys.end());
}

// ---------------------------------------------------------------------------
// Positions and subterms

namespace {

void collect_positions(const Term& t, std::vector<std::size_t>& prefix, std::vector<Position>& out) {
    out.emplace_back(prefix);
    auto args = t.args();
    for (std::size_t i = 0; i < args.size(); ++i) {
        prefix.push_back(i + 1);
        collect_positions(args[i], prefix, out);
        prefix.pop_back();
    }
}

Term replace_from(const Term& s, const Position& p, std::size_t k, const Term& t) {
    if (k == p.depth()) return t;
    auto idx = p[k];
    if (idx > s.args().size()) {
        throw InvalidPosition("position " + p.to_string() + " is not a position of " + s.to_string());
    }
    std::vector<Term> args(s.args().begin(), s.args().end());
    args[idx - 1] = replace_from(args[idx - 1], p, k + 1, t);
    return Term::app(s.symbol(), std::move(args));
}

void collect_vars(const Term& t, std::vector<Variable>& ordered, std::set<Variable>& seen) {
    if (t.is_var()) {
        if (seen.insert(t.variable()).second) ordered.push_back(t.variable());
        return;
    }
    for (const auto& a : t.args()) collect_vars(a, ordered, seen);
}

}  // namespace

std::vector<Position> positions_of(const Term& t) {
    std::vector<Position> out;
    out.reserve(t.size());
    std::vector<std::size_t> prefix;
    collect_positions(t, prefix, out);
    return out;
}

bool is_position_of(const Term& t, const Position& p) {
    const Term* cur = &t;
    for (auto i : p.indices()) {
        auto args = cur->args();
        if (i == 0 || i > args.size()) return false;
        cur = &args[i - 1];
    }
    return true;
}

const Term& subterm_at(const Term& t, const Position& p) {
    const Term* cur = &t;
    for (auto i : p.indices()) {
        auto args = cur->args();
        if (i == 0 || i > args.size()) {
            throw InvalidPosition("position " + p.to_string() + " is not a position of " + t.to_string());
        }
        cur = &args[i - 1];
    }
    return *cur;
}

Term replace_at(const Term& s, const Position& p, const Term& t) {
    return replace_from(s, p, 0, t);
}

const Symbol& root_symbol(const Term& t) { return t.symbol(); }

std::set<Variable> vars_of(const Term& t) {
    std::vector<Variable> ordered;
    std::set<Variable> seen;
    collect_vars(t, ordered, seen);
    return seen;
}

std::vector<Variable> vars_in_order(const Term& t) {
    std::vector<Variable> ordered;
    std::set<Variable> seen;
    collect_vars(t, ordered, seen);
    return ordered;
}

bool is_ground(const Term& t) {
    if (t.is_var()) return false;
    return std::all_of(t.args().begin(), t.args().end(), [](const Term& a) { return is_ground(a); });
}

}  // namespace rdp
