#pragma once

#include <stdexcept>
#include <string>

namespace selseg {

enum class ErrorCode {
    Param = 1,      // invalid parameter or marker set
    Dimension,      // grid sizes incompatible with the operation
    Format,         // malformed input file
    Io,             // unreadable / unwritable path
    Numeric,        // non-finite values encountered
    Singular,       // singular linear (sub)system
    Degenerate,     // degenerate region weights in the intensity means
    Diverged,       // the iteration stopped making progress
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

} // namespace selseg
