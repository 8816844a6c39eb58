#pragma once

#include <variant>

#include <boost/multiprecision/cpp_int.hpp>

#include "diaglab/term.hpp"

namespace diaglab {

// Injective canonical code: tagged byte serialization of the AST mapped to
// N by bijective base-256 (docs/codec.md).
using GodelCode = boost::multiprecision::cpp_int;

GodelCode encode_term(const SeqTerm& t);
GodelCode encode_term(const EnumTerm& t);

using DecodedTerm = std::variant<SeqTerm, EnumTerm>;

// Exact inverse of encode_term on its image; throws InvalidCodeError for
// every natural that is not the code of a well-formed term.
DecodedTerm decode_term(const GodelCode& code);

}  // namespace diaglab
