#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace orbdet {

enum class ErrorCode {
    InvalidArgument,
    FrameMismatch,
    SubsurfaceState,
    IntegrationFailure,
    Reentry,
    DegenerateGeometry,
    InfeasibleMeasurement,
    NonCoplanarInput,
    IllConditionedGeometry,
    EpochOrdering,
    EpochMismatch,
    SingularInnovation,
    NoFix,
    Visibility,
    EmptyInput,
    Alignment,
    Format,
    Scenario,
    UnsupportedOrbit,
    InitializationFailure,
    NumericalFailure,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Single exception type for the library. Callers branch on code(); epoch()
/// is set when the failure is tied to a point on the scenario timeline.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what,
          std::optional<double> epoch = std::nullopt)
        : std::runtime_error(what), code_(code), epoch_(epoch) {}

    ErrorCode code() const noexcept { return code_; }
    std::optional<double> epoch() const noexcept { return epoch_; }

private:
    ErrorCode code_;
    std::optional<double> epoch_;
};

/// True for codes caused by bad input files or scenario definitions, as
/// opposed to numerical breakdowns during a run.
bool is_input_error(ErrorCode code) noexcept;

}  // namespace orbdet
