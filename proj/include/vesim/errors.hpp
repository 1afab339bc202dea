#pragma once

#include <stdexcept>
#include <string>

namespace vesim {

// Root of the library's exception hierarchy.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Scenario/config problems: bad files, bad values, mutually exclusive keys.
struct ConfigError : Error {
    using Error::Error;
};

// The model cannot be evaluated at the requested point (bad airflow, no
// feasible root, unsolvable baseline, ...).
struct ModelError : Error {
    using Error::Error;
};

struct NegativeAirflow : ModelError {
    using ModelError::ModelError;
};

struct RatioOutOfRange : ModelError {
    using ModelError::ModelError;
};

struct NegativeCooling : ModelError {
    using ModelError::ModelError;
};

struct InfeasibleBaseline : ModelError {
    using ModelError::ModelError;
};

struct InfeasiblePower : ModelError {
    using ModelError::ModelError;
};

struct DiscriminantNegative : ModelError {
    using ModelError::ModelError;
};

struct UnstableDischarge : ModelError {
    using ModelError::ModelError;
};

struct NoRecoveryPossible : ModelError {
    using ModelError::ModelError;
};

// Zone temperature left the comfort band (strict mode only).
struct ComfortViolation : ModelError {
    using ModelError::ModelError;
};

// Numeric integration produced NaN/inf state.
struct NonFiniteState : ModelError {
    using ModelError::ModelError;
};

// An iterative procedure (recovery search) hit its cap without converging.
struct NoConvergence : ModelError {
    using ModelError::ModelError;
};

}  // namespace vesim
