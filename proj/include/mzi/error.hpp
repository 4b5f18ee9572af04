// Copyright 2026 The mzi-herald Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MZI_ERROR_HPP
#define MZI_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace mzi {

enum class ErrorCode {
    ClosedFormMismatch,
    OrderOverflow,
    NonzeroConstantTerm,
    VariableMismatch,
    DimensionTooLarge,
    PhotonNumberMismatch,
    HeraldImpossible,
    CutoffInadequate,
    ResidualMassTooLarge,
    OutOfTableRange,
    SeriesOrderTooLarge,
    NonpositiveVariance,
    QuantityMismatch,
    AxisNotSymmetric,
    VerificationFailed,
    InvalidArgument,
};

constexpr std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::ClosedFormMismatch: return "ClosedFormMismatch";
        case ErrorCode::OrderOverflow: return "OrderOverflow";
        case ErrorCode::NonzeroConstantTerm: return "NonzeroConstantTerm";
        case ErrorCode::VariableMismatch: return "VariableMismatch";
        case ErrorCode::DimensionTooLarge: return "DimensionTooLarge";
        case ErrorCode::PhotonNumberMismatch: return "PhotonNumberMismatch";
        case ErrorCode::HeraldImpossible: return "HeraldImpossible";
        case ErrorCode::CutoffInadequate: return "CutoffInadequate";
        case ErrorCode::ResidualMassTooLarge: return "ResidualMassTooLarge";
        case ErrorCode::OutOfTableRange: return "OutOfTableRange";
        case ErrorCode::SeriesOrderTooLarge: return "SeriesOrderTooLarge";
        case ErrorCode::NonpositiveVariance: return "NonpositiveVariance";
        case ErrorCode::QuantityMismatch: return "QuantityMismatch";
        case ErrorCode::AxisNotSymmetric: return "AxisNotSymmetric";
        case ErrorCode::VerificationFailed: return "VerificationFailed";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

/// Precondition violations are reported as InvalidArgument, everything else
/// is a failure of the computation itself.
constexpr bool is_validation_error(ErrorCode code) {
    return code == ErrorCode::InvalidArgument || code == ErrorCode::OutOfTableRange ||
           code == ErrorCode::SeriesOrderTooLarge || code == ErrorCode::DimensionTooLarge ||
           code == ErrorCode::PhotonNumberMismatch || code == ErrorCode::QuantityMismatch ||
           code == ErrorCode::AxisNotSymmetric;
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code), message_(message) {}

    ErrorCode code() const noexcept { return code_; }
    const std::string& message() const noexcept { return message_; }

private:
    ErrorCode code_;
    std::string message_;
};

}  // namespace mzi

#endif  // MZI_ERROR_HPP
