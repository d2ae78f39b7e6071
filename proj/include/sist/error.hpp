#pragma once

#include <stdexcept>
#include <string>

namespace sist {

// Numeric values are part of the C ABI (see sist.h); append only.
enum class ErrorCode : int {
    Ok = 0,
    InvalidArgument = 1,
    IoError = 2,
    EmptyInput = 3,
    RaggedLengths = 4,
    NonNumericValue = 5,
    NonFiniteValue = 6,
    NotBinary = 7,
    TooFewPerClass = 8,
    LengthMismatch = 9,
    ShapeletLongerThanSeries = 10,
    PlacementOutOfRange = 11,
    LengthTooLarge = 12,
    EmptyClass = 13,
    MetricPlacementMismatch = 14,
    InvalidCutPoints = 15,
    SingleClass = 16,
    DimensionMismatch = 17,
    CandidateStarvation = 18,
    UnknownClass = 19,
    SchemaVersionMismatch = 20,
    CorruptModel = 21,
    CandidateBudgetExceeded = 22,
    Internal = 99,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
    throw Error(code, std::string(to_string(code)) + ": " + message);
}

}  // namespace sist
