#pragma once

#include <string>

#include "diaglab/term.hpp"

namespace diaglab {

SeqTerm parse_seq(const std::string& text);
EnumTerm parse_enum(const std::string& text);
FamilyTerm parse_family(const std::string& text);

// Canonical form: parse(print_term(t)) reconstructs t exactly.
std::string print_term(const SeqTerm& t);
std::string print_term(const EnumTerm& t);
std::string print_term(const FamilyTerm& t);

}  // namespace diaglab
