#pragma once

#include <stdexcept>
#include <string>

namespace rhw {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Invalid parameter or out-of-domain input (bad randomizer params, t beyond curve, ...).
struct DomainError : Error {
    using Error::Error;
};

/// Gram matrix lost positive definiteness: N too large for this randomizer's conditioning.
struct ConditioningError : Error {
    using Error::Error;
};

/// A quadrature node violates a model-domain constraint (e.g. eta <= 0).
struct ConfigError : Error {
    using Error::Error;
};

/// Root search / implied-vol inversion failed; message carries diagnostics.
struct NumericalError : Error {
    using Error::Error;
};

/// All calibration starts were penalized or the optimizer never converged.
struct CalibrationError : Error {
    using Error::Error;
};

} // namespace rhw
