#pragma once

#include <stdexcept>
#include <string>

namespace stablab {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TooFewPointsError : Error {
    using Error::Error;
};

struct GridMismatchError : Error {
    using Error::Error;
};

struct DimensionMismatchError : Error {
    using Error::Error;
};

// Invalid scalar argument or precondition violation (dt <= 0, negative mass, ...).
struct DomainError : Error {
    using Error::Error;
};

struct IntegrationDivergedError : Error {
    int step;
    explicit IntegrationDivergedError(int step_index)
        : Error("integration diverged at step " + std::to_string(step_index)),
          step(step_index) {}
};

// |psi| fell below the unwrap floor; carries the offending sample.
struct AmplitudeFloorError : Error {
    int index;
    double x;
    AmplitudeFloorError(int sample_index, double x_location)
        : Error("amplitude below floor at index " + std::to_string(sample_index) +
                " (x = " + std::to_string(x_location) + ")"),
          index(sample_index),
          x(x_location) {}
};

// Complete-integral derivative requested at a caustic where dS/dq vanishes.
struct BranchSingularityError : Error {
    using Error::Error;
};

struct NotIndependentError : Error {
    using Error::Error;
};

struct ZeroEnergyError : Error {
    using Error::Error;
};

struct TrajectoryLeftGridError : Error {
    using Error::Error;
};

struct SupportOverflowError : Error {
    using Error::Error;
};

struct DensityFloorError : Error {
    using Error::Error;
};

struct UnknownScenarioError : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

}  // namespace stablab
