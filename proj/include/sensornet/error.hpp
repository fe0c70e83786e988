#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sensornet {

enum class ErrorCode {
    DuplicateEdge,
    SelfLoop,
    InvalidIndex,
    NonSPDCovariance,
    DimensionMismatch,
    DisconnectedGraph,
    NotStochastic,
    NotPrimitive,
    StabilityViolation,
    NonPositiveParam,
    CoincidentTargetSensor,
    NotAnEdge,
    WeightSumViolation,
    NonSPDNoise,
    SingularInformation,
    NonInvertiblePrediction,
    MissingMeasurement,
    SingularDegreeBlock,
    NonPositiveDelta,
    SingularMatrix,
    RankDeficient,
    ConfigError,
    IoError,
};

[[nodiscard]] constexpr std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::DuplicateEdge: return "DuplicateEdge";
        case ErrorCode::SelfLoop: return "SelfLoop";
        case ErrorCode::InvalidIndex: return "InvalidIndex";
        case ErrorCode::NonSPDCovariance: return "NonSPDCovariance";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::DisconnectedGraph: return "DisconnectedGraph";
        case ErrorCode::NotStochastic: return "NotStochastic";
        case ErrorCode::NotPrimitive: return "NotPrimitive";
        case ErrorCode::StabilityViolation: return "StabilityViolation";
        case ErrorCode::NonPositiveParam: return "NonPositiveParam";
        case ErrorCode::CoincidentTargetSensor: return "CoincidentTargetSensor";
        case ErrorCode::NotAnEdge: return "NotAnEdge";
        case ErrorCode::WeightSumViolation: return "WeightSumViolation";
        case ErrorCode::NonSPDNoise: return "NonSPDNoise";
        case ErrorCode::SingularInformation: return "SingularInformation";
        case ErrorCode::NonInvertiblePrediction: return "NonInvertiblePrediction";
        case ErrorCode::MissingMeasurement: return "MissingMeasurement";
        case ErrorCode::SingularDegreeBlock: return "SingularDegreeBlock";
        case ErrorCode::NonPositiveDelta: return "NonPositiveDelta";
        case ErrorCode::SingularMatrix: return "SingularMatrix";
        case ErrorCode::RankDeficient: return "RankDeficient";
        case ErrorCode::ConfigError: return "ConfigError";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

/// Library-wide exception. Every failure path carries a machine-readable code.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

}  // namespace sensornet
