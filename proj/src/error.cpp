#include "sist/error.hpp"

namespace sist {

const char* to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::Ok: return "Ok";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::IoError: return "IoError";
        case ErrorCode::EmptyInput: return "EmptyInput";
        case ErrorCode::RaggedLengths: return "RaggedLengths";
        case ErrorCode::NonNumericValue: return "NonNumericValue";
        case ErrorCode::NonFiniteValue: return "NonFiniteValue";
        case ErrorCode::NotBinary: return "NotBinary";
        case ErrorCode::TooFewPerClass: return "TooFewPerClass";
        case ErrorCode::LengthMismatch: return "LengthMismatch";
        case ErrorCode::ShapeletLongerThanSeries: return "ShapeletLongerThanSeries";
        case ErrorCode::PlacementOutOfRange: return "PlacementOutOfRange";
        case ErrorCode::LengthTooLarge: return "LengthTooLarge";
        case ErrorCode::EmptyClass: return "EmptyClass";
        case ErrorCode::MetricPlacementMismatch: return "MetricPlacementMismatch";
        case ErrorCode::InvalidCutPoints: return "InvalidCutPoints";
        case ErrorCode::SingleClass: return "SingleClass";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::CandidateStarvation: return "CandidateStarvation";
        case ErrorCode::UnknownClass: return "UnknownClass";
        case ErrorCode::SchemaVersionMismatch: return "SchemaVersionMismatch";
        case ErrorCode::CorruptModel: return "CorruptModel";
        case ErrorCode::CandidateBudgetExceeded: return "CandidateBudgetExceeded";
        case ErrorCode::Internal: return "Internal";
    }
    return "Unknown";
}

}  // namespace sist
