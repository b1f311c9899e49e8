#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fixpt {

enum class ErrorCode {
    InvalidPoint,
    InvalidParameter,
    DimensionMismatch,
    UnsupportedKind,
    SingularProx,
    BranchBudgetExceeded,
    ContinuumEncountered,
    NotAFixedPoint,
    EmptySample,
    DegenerateZeroSet,
    NotANormalPair,
    InverseSetUnavailable,
    MissingReference,
    ParseError,
    PathResolutionError,
};

/* every failure raised by the library carries one of the codes above; the
 * message is meant for humans and may be prefixed by callers adding context */
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message)
{
    throw Error(code, message);
}

inline void require(bool condition, ErrorCode code, const std::string& message)
{
    if (!condition) fail(code, message);
}

inline std::string_view to_string(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::InvalidPoint: return "InvalidPoint";
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::UnsupportedKind: return "UnsupportedKind";
    case ErrorCode::SingularProx: return "SingularProx";
    case ErrorCode::BranchBudgetExceeded: return "BranchBudgetExceeded";
    case ErrorCode::ContinuumEncountered: return "ContinuumEncountered";
    case ErrorCode::NotAFixedPoint: return "NotAFixedPoint";
    case ErrorCode::EmptySample: return "EmptySample";
    case ErrorCode::DegenerateZeroSet: return "DegenerateZeroSet";
    case ErrorCode::NotANormalPair: return "NotANormalPair";
    case ErrorCode::InverseSetUnavailable: return "InverseSetUnavailable";
    case ErrorCode::MissingReference: return "MissingReference";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::PathResolutionError: return "PathResolutionError";
    }
    return "Unknown";
}

} // namespace fixpt
