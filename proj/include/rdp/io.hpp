#pragma once

#include <set>
#include <string>

#include <json.hpp>

#include "rdp/dependency_pairs.hpp"
#include "rdp/pvs0.hpp"

namespace rdp {

using json = nlohmann::ordered_json;

/// Reads a TRS in the TPDB-like format
///
///   (VAR x y)
///   (RULES
///     a(0,y) -> s(y)
///   )
///
/// `(COMMENT ...)` blocks are skipped. Throws ParseError or RuleRestrictionViolated.
Trs parse_trs(const std::string& text);
std::string print_trs(const Trs& trs);

/// Identifiers in `variables` become variables, everything else a function
/// symbol whose arity is taken from the use. Throws ParseError.
Term parse_term(const std::string& text, const std::set<Variable>& variables);

/// Parses a query term against `trs`: its variables, and its signature for
/// symbols it knows. Unknown symbols are added to the signature.
Term parse_query_term(const std::string& text, Trs& trs);

json position_to_json(const Position& p);
Position position_from_json(const json& j);

json substitution_to_json(const Substitution& sigma);
Substitution substitution_from_json(const json& j, const Trs& trs);

json witness_to_json(const ChainWitness& w);
/// Validates every entry against `trs`; a bad entry raises InvalidDepPair(index).
ChainWitness witness_from_json(const json& j, const Trs& trs);
ChainWitness parse_chain_witness(const std::string& text, const Trs& trs);

json trace_to_json(const DerivationTrace& tr);
DerivationTrace trace_from_json(const json& j, const Trs& trs);

json guard_to_json(const pvs0::Guard& g);
pvs0::Guard guard_from_json(const json& j);
json expr_to_json(const pvs0::Expr& e);
pvs0::Expr expr_from_json(const json& j);

json program_to_json(const pvs0::Program& p);
/// Throws ParseError or WidthMismatch.
pvs0::Program program_from_json(const json& j);
pvs0::Program parse_pvs0_program(const std::string& text);

std::string read_file(const std::string& path);

}  // namespace rdp
