#pragma once

#include <stdexcept>
#include <string>

namespace lddkit {

// Input file could not be parsed; message names the offending line.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Caller violated a documented precondition.
struct PreconditionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// 128-bit integer arithmetic left the representable range.
struct OverflowError : std::overflow_error {
    using std::overflow_error::overflow_error;
};

// A stated output guarantee failed; carries a witness description.
struct GuaranteeError : std::logic_error {
    using std::logic_error::logic_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

#define LDD_REQUIRE(cond, msg)                                   \
    do {                                                         \
        if (!(cond)) throw ::lddkit::PreconditionError(msg);     \
    } while (0)

#define LDD_ENSURE(cond, msg)                                    \
    do {                                                         \
        if (!(cond)) throw ::lddkit::GuaranteeError(msg);        \
    } while (0)

} // namespace lddkit
