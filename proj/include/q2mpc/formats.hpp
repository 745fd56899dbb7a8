#pragma once

#include <string>

#include "q2mpc/engine.hpp"
#include "q2mpc/msp.hpp"
#include "q2mpc/structures.hpp"

namespace q2mpc {

// Line-oriented text grammars. '#' starts a comment anywhere in a line and
// blank lines are skipped; every parse failure carries the 1-based line and
// column of the offending token.

Circuit parse_circuit(const std::string& text);
std::string serialize(const Circuit& c);

// Player count is inferred from the owner list (largest index plus one).
Msp parse_msp(const std::string& text);
std::string serialize(const Msp& m);

AdversaryStructure parse_structure(const std::string& text);
std::string serialize(const AdversaryStructure& s);

std::string read_file(const std::string& path);

}  // namespace q2mpc
