#include "orbdet/errors.hpp"

namespace orbdet {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidArgument: return "invalid-argument";
        case ErrorCode::FrameMismatch: return "frame-mismatch";
        case ErrorCode::SubsurfaceState: return "subsurface-state";
        case ErrorCode::IntegrationFailure: return "integration-failure";
        case ErrorCode::Reentry: return "reentry";
        case ErrorCode::DegenerateGeometry: return "degenerate-geometry";
        case ErrorCode::InfeasibleMeasurement: return "infeasible-measurement";
        case ErrorCode::NonCoplanarInput: return "non-coplanar-input";
        case ErrorCode::IllConditionedGeometry: return "ill-conditioned-geometry";
        case ErrorCode::EpochOrdering: return "epoch-ordering";
        case ErrorCode::EpochMismatch: return "epoch-mismatch";
        case ErrorCode::SingularInnovation: return "singular-innovation";
        case ErrorCode::NoFix: return "no-fix";
        case ErrorCode::Visibility: return "visibility";
        case ErrorCode::EmptyInput: return "empty-input";
        case ErrorCode::Alignment: return "alignment";
        case ErrorCode::Format: return "format";
        case ErrorCode::Scenario: return "scenario";
        case ErrorCode::UnsupportedOrbit: return "unsupported-orbit";
        case ErrorCode::InitializationFailure: return "initialization-failure";
        case ErrorCode::NumericalFailure: return "numerical-failure";
    }
    return "unknown";
}

bool is_input_error(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidArgument:
        case ErrorCode::EmptyInput:
        case ErrorCode::Alignment:
        case ErrorCode::Format:
        case ErrorCode::Scenario:
        case ErrorCode::UnsupportedOrbit:
        case ErrorCode::InitializationFailure:
        case ErrorCode::Visibility:
            return true;
        default:
            return false;
    }
}

}  // namespace orbdet
