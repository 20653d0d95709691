#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace permon {

enum class ErrorKind {
    Domain,
    SingularPoint,
    OutOfRegime,
    ToleranceUnreachable,
    ExceptionalWeight,
    UnderResolved,
    InsufficientJmax,
    InvalidData,
    LambdaTooSmall,
    RegionTooClose,
    Origin,
    CoercivityNonPositive,
    WeightOutOfRange,
};

constexpr std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::Domain: return "domain";
        case ErrorKind::SingularPoint: return "singular-point";
        case ErrorKind::OutOfRegime: return "out-of-regime";
        case ErrorKind::ToleranceUnreachable: return "tolerance-unreachable";
        case ErrorKind::ExceptionalWeight: return "exceptional-weight";
        case ErrorKind::UnderResolved: return "under-resolved";
        case ErrorKind::InsufficientJmax: return "insufficient-jmax";
        case ErrorKind::InvalidData: return "invalid-data";
        case ErrorKind::LambdaTooSmall: return "lambda-too-small";
        case ErrorKind::RegionTooClose: return "region-too-close-to-center";
        case ErrorKind::Origin: return "origin";
        case ErrorKind::CoercivityNonPositive: return "coercivity-non-positive";
        case ErrorKind::WeightOutOfRange: return "weight-out-of-range";
    }
    return "unknown";
}

/// Every failure raised by the library carries a machine-readable kind.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace permon
