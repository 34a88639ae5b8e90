#pragma once

#include <stdexcept>
#include <string>

namespace temple {

enum class ErrorCode {
    InvalidDomain,       // degenerate invariant box
    OutOfDomain,         // value outside the invariant box
    ZeroJump,            // Riemann states coincide
    NotElementaryWave,   // states differ in more than the requested invariant
    GridMismatch,        // state not on the value grid
    NotBackwardSolvable, // terminal jump violates the one-quantum condition
    DomainMismatch,      // profiles live on different intervals
    HorizonTooShort,     // requested final time at or below the flush horizon
    NotAttainable,       // target fails the attainability inequalities
    Runaway,             // event count exceeded the configured cap
    CalibrationFailure,  // constant fit did not converge
    BadInput,            // malformed file or config
};

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const { return code_; }

  private:
    ErrorCode code_;
};

inline const char* error_code_name(ErrorCode c) {
    switch (c) {
        case ErrorCode::InvalidDomain: return "invalid-domain";
        case ErrorCode::OutOfDomain: return "out-of-domain";
        case ErrorCode::ZeroJump: return "zero-jump";
        case ErrorCode::NotElementaryWave: return "not-an-elementary-wave";
        case ErrorCode::GridMismatch: return "grid-mismatch";
        case ErrorCode::NotBackwardSolvable: return "not-backward-solvable";
        case ErrorCode::DomainMismatch: return "domain-mismatch";
        case ErrorCode::HorizonTooShort: return "horizon-too-short";
        case ErrorCode::NotAttainable: return "not-attainable";
        case ErrorCode::Runaway: return "runaway";
        case ErrorCode::CalibrationFailure: return "calibration-failure";
        case ErrorCode::BadInput: return "bad-input";
    }
    return "unknown";
}

}  // namespace temple
