#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rdp/dependency_pairs.hpp"

namespace rdp::pvs0 {

/// Tuple of naturals; the width is fixed per program.
using Value = std::vector<std::uint64_t>;

/// "(9,0)"
std::string to_string(const Value& v);
/// Accepts "2,3" or "(2,3)".
Value parse_value(const std::string& text);

// ---------------------------------------------------------------------------
// Operator bodies

enum class Sort { Nat, Bool, Tuple };

/// Total expression language for operator bodies.
class Guard {
public:
    enum class Op { Arg, Comp, Nat, Add, Monus, Lt, Gt, Eq, And, Or, Not, If, Tuple, Top, Bot };

    static Guard arg(std::size_t i);
    static Guard comp(std::size_t i, std::size_t k);
    static Guard nat(std::uint64_t c);
    static Guard add(Guard a, Guard b);
    static Guard monus(Guard a, Guard b);
    static Guard lt(Guard a, Guard b);
    static Guard gt(Guard a, Guard b);
    static Guard eq(Guard a, Guard b);
    static Guard and_(Guard a, Guard b);
    static Guard or_(Guard a, Guard b);
    static Guard not_(Guard a);
    static Guard if_(Guard c, Guard t, Guard e);
    static Guard tuple(std::vector<Guard> items);
    static Guard top();
    static Guard bot();

    Op op() const { return op_; }
    std::uint64_t a() const { return a_; }
    std::uint64_t b() const { return b_; }
    const std::vector<Guard>& kids() const { return kids_; }

    /// Sort of the expression for operators of `arity` over tuples of `width`.
    /// Throws ParseError when ill-typed.
    Sort check(std::size_t arity, std::size_t width) const;

    std::string to_string() const;
    bool operator==(const Guard&) const = default;

private:
    Guard(Op op, std::uint64_t a, std::uint64_t b, std::vector<Guard> kids)
        : op_(op), a_(a), b_(b), kids_(std::move(kids)) {}

    Op op_;
    std::uint64_t a_ = 0;
    std::uint64_t b_ = 0;
    std::vector<Guard> kids_;
};

struct OperatorDef {
    std::size_t arity = 1;
    Guard body = Guard::bot();

    bool operator==(const OperatorDef&) const = default;
};

// ---------------------------------------------------------------------------
// Programs

class Expr {
public:
    enum class Kind { Cnst, Vr, Op1, Op2, Rec, Ite };

    static Expr cnst(Value v);
    static Expr vr();
    static Expr op1(std::size_t j, Expr e);
    static Expr op2(std::size_t j, Expr e1, Expr e2);
    static Expr rec(Expr e);
    static Expr ite(Expr c, Expr t, Expr e);

    Kind kind() const { return kind_; }
    std::size_t index() const { return index_; }
    const Value& value() const { return value_; }
    const std::vector<Expr>& kids() const { return kids_; }
    /// 1-based, like term positions.
    const Expr& kid(std::size_t i) const { return kids_.at(i - 1); }

    std::size_t size() const;
    std::string to_string() const;
    bool operator==(const Expr&) const = default;

private:
    Expr(Kind kind, std::size_t index, Value value, std::vector<Expr> kids)
        : kind_(kind), index_(index), value_(std::move(value)), kids_(std::move(kids)) {}

    Kind kind_;
    std::size_t index_ = 0;
    Value value_;
    std::vector<Expr> kids_;
};

struct Program {
    std::size_t width = 1;
    Value false_val;
    Value top_val;
    std::vector<OperatorDef> o1;
    std::vector<OperatorDef> o2;
    Expr body = Expr::vr();

    /// Throws WidthMismatch / ParseError on inconsistent data.
    void validate() const;
    bool operator==(const Program&) const = default;
};

/// The Ackermann program: ⊥=(0,0), ⊤=(1,0), five unary and one binary operator.
Program ackermann_program();

/// Evaluates an operator body. Throws ArityMismatch or WidthMismatch.
Value guard_eval(const Program& p, const OperatorDef& def, std::span<const Value> args);

/// χ: nullopt is ⋄. Fuel is consumed only when `rec` re-enters the body.
std::optional<Value> chi_eval(const Program& p, const Expr& e, const Value& v, std::size_t fuel);

enum class Verdict { Holds, Refuted, UnknownWithinFuel };
std::string to_string(Verdict v);

struct EpsilonResult {
    Verdict verdict = Verdict::UnknownWithinFuel;
    std::optional<Value> observed;   ///< the value χ stabilizes at, if any
    std::optional<std::size_t> fuel;  ///< least fuel giving `observed`
};

/// ε(e, v_i, v_o) decided by χ with at most `max_fuel`.
EpsilonResult epsilon_check(const Program& p, const Expr& e, const Value& v_in, const Value& v_out,
                            std::size_t max_fuel);

/// Least fuel n <= max_fuel with χ(e, v, n) ≠ ⋄.
std::optional<std::size_t> least_fuel(const Program& p, const Expr& e, const Value& v, std::size_t max_fuel);

/// least_fuel on the program body.
std::optional<std::size_t> terminates_on(const Program& p, const Value& v, std::size_t max_fuel);

// ---------------------------------------------------------------------------
// Calling contexts

struct CallingContext {
    Position path;                              ///< rec node, 1-based child indices
    std::vector<std::pair<Expr, bool>> condition;  ///< ite guards, outermost first
    Expr actual = Expr::vr();

    bool operator==(const CallingContext&) const = default;
};

/// One context per rec node of the body, depth-first.
std::vector<CallingContext> calling_contexts(const Program& p);

/// Every guard of `cc` evaluates with its polarity on `v`; ⋄ counts as not holding.
bool condition_holds(const Program& p, const CallingContext& cc, const Value& v, std::size_t fuel);

using Encoder = std::function<Term(const Value&)>;

/// v ↦ root(succ^v0(zero), ..., succ^vk(zero)). Throws WidthMismatch when the
/// value width differs from `width`.
Encoder peano_encoder(const std::string& root, const std::string& succ, const std::string& zero,
                      std::size_t width);

struct CcDpPair {
    std::size_t context = 0;  ///< 0-based into calling_contexts
    DepPairAlt dp;
};

struct CcDpSample {
    Value sample;
    bool condition = false;
    bool matches = false;
    /// Set when both sides are defined: the encoded actual equals the
    /// instantiated rhs subterm after non-root innermost normalization.
    std::optional<bool> actual_agrees;

    bool ok() const { return condition == matches && actual_agrees.value_or(true); }
};

struct CcDpPairReport {
    CcDpPair pair;
    std::vector<CcDpSample> samples;

    bool passed() const;
};

struct CcDpReport {
    std::vector<CcDpPairReport> pairs;

    bool passed() const;
};

CcDpReport check_cc_dp_correspondence(const Program& p, const Trs& trs, const Encoder& encode,
                                      const std::vector<CcDpPair>& pairs, const std::vector<Value>& samples,
                                      std::size_t fuel = kDefaultFuel);

}  // namespace rdp::pvs0
