#pragma once

#include <stdexcept>
#include <string>

namespace ryd {

enum class ErrorCode {
    InvalidArgument,
    DimensionMismatch,
    CGOverflow,
    InglisTellerExceeded,
    BasisNotFull,
    PropagationTolerance,
    NoConvergence,
    EDBudgetExceeded,
    FitFailure,
    OutsideMassivePhase,
    Gapless,
    CutoffTooSmall,
    NonConvergent,
    CoincidentAtoms,
    NonPlanarGeometry,
    MismatchedWaist,
    ResonanceCrossed,
    SubspaceTooLarge,
    QuadratureNonConvergence,
};

const char* error_code_name(ErrorCode c);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace ryd
