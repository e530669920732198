#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lawbench {

enum class ErrorKind {
    InvalidArgument,
    NumericFailure,
    SingularKernel,
    UnsupportedActivation,
    InvalidRegime,
    ResourceLimit,
    IoError,
};

inline std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidArgument: return "invalid-argument";
        case ErrorKind::NumericFailure: return "numeric-failure";
        case ErrorKind::SingularKernel: return "singular-kernel";
        case ErrorKind::UnsupportedActivation: return "unsupported-activation";
        case ErrorKind::InvalidRegime: return "invalid-regime";
        case ErrorKind::ResourceLimit: return "resource-limit";
        case ErrorKind::IoError: return "io-error";
    }
    return "unknown";
}

/// Every failure raised by the library carries one of the error kinds above so
/// the CLI can map it to an exit code and the sweep to a reason column.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
    throw Error(kind, what);
}

inline void require(bool cond, const std::string& what) {
    if (!cond) fail(ErrorKind::InvalidArgument, what);
}

}  // namespace lawbench
