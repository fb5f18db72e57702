#ifndef SWIRL_ERRORS_HPP
#define SWIRL_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace swirl {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Instance / .swirl file problems
struct ParseError : Error {
    using Error::Error;
};
struct ValidationError : Error {
    using Error::Error;
};
struct SyntaxError : ParseError {
    SyntaxError(const std::string& msg, int line, int col)
        : ParseError(msg + " at " + std::to_string(line) + ":" + std::to_string(col)),
          line(line), col(col) {}
    int line;
    int col;
};
struct DuplicateLocation : ParseError {
    using ParseError::ParseError;
};

// Lookup / precondition problems
struct NotFound : Error {
    using Error::Error;
};
struct PreconditionViolation : Error {
    using Error::Error;
};
struct InvalidParams : Error {
    using Error::Error;
};

// Semantics engine
struct StaleTransition : Error {
    using Error::Error;
};
struct StepLimitExceeded : Error {
    using Error::Error;
};
struct StateSpaceExceeded : Error {
    using Error::Error;
};

// Runtime
struct MetadataMissing : Error {
    using Error::Error;
};
struct DeadlockError : Error {
    using Error::Error;
};
struct StepFailure : Error {
    using Error::Error;
};
struct ConnectionFailure : Error {
    using Error::Error;
};
struct FrameCorruption : Error {
    using Error::Error;
};

}  // namespace swirl

#endif
