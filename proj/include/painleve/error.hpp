#pragma once

#include <stdexcept>
#include <string>

namespace painleve {

enum class ErrorCode {
    InvalidArgument,
    DegenerateDerivative,
    PurityViolation,
    StepUnderflow,
    AmbiguousClassification,
    SchemaError,
};

const char* to_string(ErrorCode code);

/// Every failure raised by the library carries a code so callers (and the CLI
/// exit-status mapping) can branch on the kind of failure.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace painleve
