#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace rdp {

struct Symbol {
    std::string name;
    std::size_t arity = 0;

    auto operator<=>(const Symbol&) const = default;
};

struct Variable {
    std::string name;

    auto operator<=>(const Variable&) const = default;
};

/// Function symbols with a fixed arity per name.
class Signature {
public:
    Signature() = default;
    explicit Signature(std::span<const Symbol> symbols);

    /// Adds `sym`; a second declaration of the same name must agree on arity.
    void add(const Symbol& sym);
    bool contains(const std::string& name) const { return arities_.count(name) != 0; }
    std::optional<std::size_t> arity_of(const std::string& name) const;
    std::vector<Symbol> symbols() const;
    std::size_t size() const { return arities_.size(); }

    bool operator==(const Signature&) const = default;

private:
    std::map<std::string, std::size_t> arities_;
};

/// Sequence of 1-based argument indices; the empty sequence is the root.
class Position {
public:
    Position() = default;
    Position(std::initializer_list<std::size_t> indices);
    explicit Position(std::vector<std::size_t> indices);

    static Position root() { return {}; }

    bool is_root() const { return indices_.empty(); }
    std::size_t depth() const { return indices_.size(); }
    std::size_t first() const;
    std::size_t operator[](std::size_t i) const { return indices_[i]; }
    const std::vector<std::size_t>& indices() const { return indices_; }

    Position child(std::size_t i) const;
    /// Drops the first index.
    Position tail() const;
    bool is_prefix_of(const Position& other) const;

    /// "ε" for the root, otherwise dot separated indices ("2.1").
    std::string to_string() const;
    /// Accepts "ε", "" or dot separated positive integers.
    static Position parse(const std::string& text);

    // Lexicographic order on index sequences coincides with pre-order.
    auto operator<=>(const Position&) const = default;

private:
    std::vector<std::size_t> indices_;
};

Position concat_positions(const Position& p1, const Position& p2);

/// Immutable first-order term with structural equality. Subterms are shared.
class Term {
public:
    static Term var(Variable v);
    static Term var(std::string name) { return var(Variable{std::move(name)}); }
    /// Throws ArityMismatch unless `args.size() == f.arity`.
    static Term app(Symbol f, std::vector<Term> args = {});

    bool is_var() const;
    bool is_app() const { return !is_var(); }

    /// Throws NotAnApplication on an application.
    const Variable& variable() const;
    /// Throws NotAnApplication on a variable.
    const Symbol& symbol() const;
    /// Empty for variables.
    std::span<const Term> args() const;
    const Term& arg(std::size_t i) const;  // 1-based

    std::size_t size() const;
    std::size_t depth() const;
    std::size_t hash() const;

    std::string to_string() const;

    friend bool operator==(const Term& a, const Term& b);
    friend std::strong_ordering operator<=>(const Term& a, const Term& b);

private:
    struct App {
        Symbol symbol;
        std::vector<Term> args;
    };
    struct Node;
    explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

    std::shared_ptr<const Node> node_;
};

struct TermHash {
    std::size_t operator()(const Term& t) const { return t.hash(); }
};

/// Every valid position of `t`, in depth-first pre-order (root first).
std::vector<Position> positions_of(const Term& t);
bool is_position_of(const Term& t, const Position& p);
/// Throws InvalidPosition when `p` is not a position of `t`.
const Term& subterm_at(const Term& t, const Position& p);
Term replace_at(const Term& s, const Position& p, const Term& t);
const Symbol& root_symbol(const Term& t);
std::set<Variable> vars_of(const Term& t);
/// Variables in left-to-right order of first occurrence.
std::vector<Variable> vars_in_order(const Term& t);
bool is_ground(const Term& t);

}  // namespace rdp
