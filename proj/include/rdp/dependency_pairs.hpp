#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rdp/rewriting.hpp"

namespace rdp {

/// A dependency pair identified by the rule that produces it and the rhs
/// position of its defined-rooted subterm.
struct DepPairAlt {
    std::size_t rule_index = 0;
    Position position;

    auto operator<=>(const DepPairAlt&) const = default;
    std::string to_string() const;
};

/// A dependency pair as a pair of terms ⟨lhs, rhs subterm⟩.
struct DepPair {
    Term lhs;
    Term rhs_sub;

    bool operator==(const DepPair&) const = default;
    std::string to_string() const;
};

struct ChainEntry {
    DepPairAlt dp;
    Substitution sigma;

    bool operator==(const ChainEntry&) const = default;
};

/// Finite prefix of a dependency chain with one substitution per pair.
struct ChainWitness {
    std::vector<ChainEntry> entries;

    std::size_t size() const { return entries.size(); }
    bool empty() const { return entries.empty(); }
    bool operator==(const ChainWitness&) const = default;
};

/// An innermost derivation from `trace.start` to a term that contains
/// `trace.start` at `embedding`. With `embedding` = ε this is an exact cycle.
/// Either shape witnesses an infinite innermost derivation from the start term.
struct LoopCertificate {
    DerivationTrace trace;
    Position embedding;

    const Term& start() const { return trace.start; }
    bool is_cycle() const { return embedding.is_root(); }
};

enum class Status { Verified, NotFound, Failure };
std::string to_string(Status s);

enum class FailureKind {
    PreconditionFailed,
    InvalidDepPair,
    NoRootRule,
    NoMintWithinFuel,
    NoLoopCertificate,
    FuelExhaustedNormalizing,
    ChainCheckFailed,
};
std::string to_string(FailureKind k);

struct Failure {
    FailureKind kind;
    std::string message;

    std::string to_string() const;
};

/// Either a value or the reason it could not be produced.
template <class T>
class Outcome {
public:
    Outcome(T value) : value_(std::move(value)) {}
    Outcome(Failure failure) : failure_(std::move(failure)) {}

    explicit operator bool() const { return value_.has_value(); }
    const T& value() const { return *value_; }
    T& value() { return *value_; }
    const T* operator->() const { return &*value_; }
    const Failure& failure() const { return *failure_; }

private:
    std::optional<T> value_;
    std::optional<Failure> failure_;
};

// ---------------------------------------------------------------------------
// Extraction

bool is_dep_pair_alt(const Trs& trs, const DepPairAlt& dp);

/// All (rule, rhs position) pairs with a defined-rooted subterm, ordered by
/// rule index then position pre-order.
std::vector<DepPairAlt> dep_pairs_alt(const Trs& trs);

/// ⟨lhs(rule), rhs(rule)|position⟩. Throws InvalidDepPair for invalid input.
DepPair to_standard(const Trs& trs, const DepPairAlt& dp);

/// Variables renamed v1, v2, ... in first-occurrence order over (lhs, rhs_sub).
DepPair canonical_variant(const DepPair& dp);

/// Images of dep_pairs_alt; with `dedup`, later duplicates modulo variable
/// renaming are dropped.
std::vector<DepPair> standard_dep_pairs(const Trs& trs, bool dedup);

// ---------------------------------------------------------------------------
// Chains

struct PairInstance {
    DepPair pair;
    Substitution sigma;
};

struct LinkResult {
    Status status = Status::NotFound;
    std::optional<DerivationTrace> trace;
    std::optional<Failure> failure;
    std::size_t explored = 0;
    bool closure_complete = false;

    bool verified() const { return status == Status::Verified; }
};

/// Chain link between two pair instances: rhs_sub1σ1 derives to lhs2σ2 by
/// non-root (innermost) steps; the innermost variant also requires both lhs
/// instances to have normal proper subterms.
LinkResult check_chained_pairs(const Trs& trs, const PairInstance& first, const PairInstance& second,
                               bool innermost, std::size_t fuel = kDefaultFuel);

LinkResult check_chained(const Trs& trs, const ChainEntry& first, const ChainEntry& second, bool innermost,
                         std::size_t fuel = kDefaultFuel);

struct ChainVerdict {
    Status status = Status::Verified;
    std::vector<DerivationTrace> traces;  ///< one per verified link
    std::optional<std::size_t> failed_link;
    std::optional<Failure> failure;
    std::size_t explored = 0;

    bool verified() const { return status == Status::Verified; }
};

ChainVerdict verify_chain_prefix(const Trs& trs, const ChainWitness& w, bool innermost,
                                 std::size_t fuel = kDefaultFuel);

/// Each entry's rule instantiated with variables renamed apart from every
/// other entry, with the substitution domain renamed accordingly.
std::vector<PairInstance> rename_witness_apart(const Trs& trs, const ChainWitness& w);

ChainVerdict verify_pair_chain(const Trs& trs, const std::vector<PairInstance>& chain, bool innermost,
                               std::size_t fuel = kDefaultFuel);

// ---------------------------------------------------------------------------
// Chain → innermost derivation

/// Accumulated context and hole position after the first `i + 1` entries.
std::pair<Term, Position> term_pos_dps_alt(const Trs& trs, const ChainWitness& w, std::size_t i);

struct ChainDerivation {
    std::vector<Term> terms;
    std::vector<Position> positions;
    std::vector<DerivationTrace> links;  ///< links[i] : terms[i] →i+ terms[i+1]
};

Outcome<ChainDerivation> derivation_from_chain(const Trs& trs, const ChainWitness& w,
                                               std::size_t fuel = kDefaultFuel);

// ---------------------------------------------------------------------------
// Innermost loop → chain

bool is_valid_certificate(const Trs& trs, const LoopCertificate& cert);

struct LoopSearch {
    std::optional<LoopCertificate> certificate;
    std::size_t explored = 0;
    bool closure_complete = false;
};

/// Breadth-first exploration of the innermost descendants of `s` (at most
/// `fuel` terms). Stops at the first step back to an ancestor (exact cycle)
/// or the first new term containing an ancestor (u →i+ C[u]); otherwise the
/// explored graph is searched for any cycle. Finding nothing is not a
/// termination proof.
LoopSearch detect_innermost_loop(const Trs& trs, const Term& s, std::size_t fuel = kDefaultFuel);

struct MintSubterm {
    Position position;
    LoopCertificate certificate;
};

/// Position of a subterm that has a loop certificate while none of its
/// proper subterms has one within `fuel`. Arguments are searched first.
std::optional<MintSubterm> find_mint_subterm(const Trs& trs, const Term& t, std::size_t fuel = kDefaultFuel);

struct DpAndSub {
    DepPairAlt dp;
    Substitution sigma;
    Term next_mint;
};

Outcome<DpAndSub> dp_and_sub_from_nrnf(const Trs& trs, const Term& t, std::size_t fuel = kDefaultFuel);

Outcome<ChainEntry> next_dp_and_sub(const Trs& trs, const ChainEntry& current, std::size_t fuel = kDefaultFuel);

Outcome<ChainWitness> chain_from_loop(const Trs& trs, const LoopCertificate& cert, std::size_t length,
                                      std::size_t fuel = kDefaultFuel);

}  // namespace rdp
