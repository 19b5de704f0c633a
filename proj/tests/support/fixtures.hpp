#pragma once

#include <string>

#include "rdp/io.hpp"

namespace rdp::testing {

inline std::string fixture(const std::string& name) { return std::string(RDP_FIXTURE_DIR) + "/" + name; }

inline Trs load_trs(const std::string& name) { return parse_trs(read_file(fixture(name))); }

inline pvs0::Program load_program(const std::string& name) { return parse_pvs0_program(read_file(fixture(name))); }

// Term over the variables of `trs`.
inline Term term(const Trs& trs, const std::string& text) { return parse_term(text, trs.variables()); }

inline Term peano(std::size_t n) {
    Term t = Term::app(Symbol{"0", 0});
    for (std::size_t i = 0; i < n; ++i) t = Term::app(Symbol{"s", 1}, {t});
    return t;
}

}  // namespace rdp::testing
