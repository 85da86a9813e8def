#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace schur {

// Typed error codes mirror the failure modes of the library surface; tests
// match on the code, messages are for humans.
enum class Errc {
    ZeroArgument,
    DuplicateEigenvalue,
    NotRegular,
    NotSplit,
    NotIrreducible,
    SingularTraceForm,
    NotUnit,
    NotTrivialClass,
    SolverOverflow,
    NotAnExtension,
    CharTooSmall,
    WrongShape,
    WrongNormalForm,
    OddCharRequired,
    IntertwinerNotScalar,
    SnapFailure,
    ConfigError,
    Internal,
};

class Error : public std::runtime_error {
  public:
    Error(Errc c, const std::string& msg) : std::runtime_error(msg), code(c) {}
    Errc code;
};

[[noreturn]] inline void fail(Errc c, const std::string& msg) { throw Error(c, msg); }

inline void require(bool ok, Errc c, const std::string& msg) {
    if (!ok) fail(c, msg);
}

}  // namespace schur
