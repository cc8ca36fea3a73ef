#pragma once

#include <stdexcept>
#include <string>

namespace pisotiles {

enum class ErrorCode {
    Internal = 1,
    Parse = 2,
    Undecidable = 3,
    InvalidRule = 4,
    RenderUnsupported = 5,
    // algebra
    NonMonic,
    NotSquarefree,
    NoDominantRealRoot,
    NotInvertible,
    NotIrreducible,
    NonFinite,
    // expansion
    DimensionMismatch,
    NotInSingleBlock,
    ZeroCoordinate,
    IndexOutOfRange,
    DegenerateBasis,
    // tiling
    ResourceLimit,
    NoSeedFound,
    WindowTooSmall,
    // spectrum
    NoPassingK,
    ReconstructionFailed,
    NotPisotFamily,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& msg)
        : std::runtime_error(msg), code_(code) {}
    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

/// Collapse detailed error codes onto the process exit codes used by the CLI.
inline int exit_code_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::Parse:
        case ErrorCode::NonMonic:
        case ErrorCode::NonFinite:
            return 2;
        case ErrorCode::Undecidable:
            return 3;
        case ErrorCode::InvalidRule:
            return 4;
        case ErrorCode::RenderUnsupported:
            return 5;
        default:
            return 1;
    }
}

}  // namespace pisotiles
