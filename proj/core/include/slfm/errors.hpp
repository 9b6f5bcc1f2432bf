#pragma once

#include <stdexcept>
#include <string>

namespace slfm {

enum class ErrorKind {
    NearZeroNorm,
    DimensionMismatch,
    RadiusMismatch,
    NotTangent,
    EmptyInput,
    DegenerateShell,
    UnknownCondition,
    InvalidArgument,
    DivergenceDetected,
    Format,
};

const char* to_string(ErrorKind kind) noexcept;

// Base for every failure raised by the library. The kind lets callers (the CLI
// in particular) map failures onto exit codes without string matching.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace slfm
