#pragma once

#include <stdexcept>
#include <string>

namespace diaglab {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Raised by the SDL parser; positions are 1-based.
struct ParseError : Error {
    int line;
    int column;
    ParseError(const std::string& msg, int line_, int col_)
        : Error(msg + " (line " + std::to_string(line_) + ", column " +
                std::to_string(col_) + ")"),
          line(line_), column(col_) {}
};

struct UnboundVariableError : ParseError {
    using ParseError::ParseError;
};

struct ZeroDivisorError : ParseError {
    using ParseError::ParseError;
};

// Argument outside an operation's domain (hashrows index >= 2^32,
// transposition with equal points, invalid builder spec, ...).
struct DomainError : Error {
    using Error::Error;
};

// A natural number that is not the code of any term.
struct InvalidCodeError : Error {
    using Error::Error;
};

// ep_of_term refuses terms outside the certified subclass.
struct NotEventuallyPeriodicError : Error {
    using Error::Error;
};

}  // namespace diaglab
