#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace steklov {

enum class ErrorKind {
    PreconditionViolation,
    GeometryMismatch,
    TagMismatch,
    GeometryInfeasible,
    DegenerateTriangle,
    SingularSystem,
    IllConditionedMass,
    NotInRange,
    AmbiguousRank,
    Io,
    Schema,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the toolkit carries a machine-readable kind.
class Error : public std::runtime_error
{
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message)
        , m_kind(kind)
    {}

    ErrorKind kind() const noexcept { return m_kind; }

private:
    ErrorKind m_kind;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message)
{
    throw Error(kind, message);
}

} // namespace steklov
