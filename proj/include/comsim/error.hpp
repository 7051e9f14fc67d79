#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace comsim {

enum class ErrorCode {
    DimensionMismatch,
    NonFinite,
    SingularSystem,
    NotConverged,
    EigenFailure,
    NonPositiveTemperature,
    NegativePower,
    InvalidParameter,
    FixedPointDiverged,
    UnresolvedCoupling,
    UnknownMode,
    UnphysicalCM,
    UnsupportedDetuning,
    HeatingRunaway,
    QuadratureNotConverged,
    Unstable,
    NoStablePoint,
    ConfigError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so that
/// sweep records and the CLI can report it without parsing messages.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

inline std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::NonFinite: return "NonFinite";
        case ErrorCode::SingularSystem: return "SingularSystem";
        case ErrorCode::NotConverged: return "NotConverged";
        case ErrorCode::EigenFailure: return "EigenFailure";
        case ErrorCode::NonPositiveTemperature: return "NonPositiveTemperature";
        case ErrorCode::NegativePower: return "NegativePower";
        case ErrorCode::InvalidParameter: return "InvalidParameter";
        case ErrorCode::FixedPointDiverged: return "FixedPointDiverged";
        case ErrorCode::UnresolvedCoupling: return "UnresolvedCoupling";
        case ErrorCode::UnknownMode: return "UnknownMode";
        case ErrorCode::UnphysicalCM: return "UnphysicalCM";
        case ErrorCode::UnsupportedDetuning: return "UnsupportedDetuning";
        case ErrorCode::HeatingRunaway: return "HeatingRunaway";
        case ErrorCode::QuadratureNotConverged: return "QuadratureNotConverged";
        case ErrorCode::Unstable: return "Unstable";
        case ErrorCode::NoStablePoint: return "NoStablePoint";
        case ErrorCode::ConfigError: return "ConfigError";
    }
    return "Unknown";
}

}  // namespace comsim
