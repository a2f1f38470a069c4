#pragma once

#include <stdexcept>
#include <string>

namespace ocl {

enum class ErrorCode {
    NoResonance,
    OrderTooLow,
    MultipleDirections,
    PsiConstant,
    NoSimpleZero,
    NoContraction,
    HorizonTooShort,
    OutsideDomain,
    ActionNegative,
    StepUnderflow,
    NonFiniteState,
    BadInput,
};

inline const char* errorCodeName(ErrorCode c) {
    switch (c) {
        case ErrorCode::NoResonance: return "NoResonance";
        case ErrorCode::OrderTooLow: return "OrderTooLow";
        case ErrorCode::MultipleDirections: return "MultipleDirections";
        case ErrorCode::PsiConstant: return "PsiConstant";
        case ErrorCode::NoSimpleZero: return "NoSimpleZero";
        case ErrorCode::NoContraction: return "NoContraction";
        case ErrorCode::HorizonTooShort: return "HorizonTooShort";
        case ErrorCode::OutsideDomain: return "OutsideDomain";
        case ErrorCode::ActionNegative: return "ActionNegative";
        case ErrorCode::StepUnderflow: return "StepUnderflow";
        case ErrorCode::NonFiniteState: return "NonFiniteState";
        case ErrorCode::BadInput: return "BadInput";
    }
    return "Unknown";
}

// Structured failure: hypothesis violations and stage errors carry a code so
// the driver can distinguish "valid analysis, negative result" from
// operational problems.
class PipelineError : public std::runtime_error {
public:
    PipelineError(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(errorCodeName(code)) + ": " + message), code_(code) {}

    ErrorCode code() const { return code_; }

    // True for outcomes that mean "the hypotheses of the construction fail
    // for this input" rather than a usage or numerical error.
    bool isHypothesisFailure() const {
        switch (code_) {
            case ErrorCode::NoResonance:
            case ErrorCode::OrderTooLow:
            case ErrorCode::MultipleDirections:
            case ErrorCode::PsiConstant:
            case ErrorCode::NoSimpleZero:
                return true;
            default:
                return false;
        }
    }

private:
    ErrorCode code_;
};

}  // namespace ocl
