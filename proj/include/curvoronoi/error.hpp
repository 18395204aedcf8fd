#pragma once

#include <stdexcept>
#include <string>

namespace curvo {

// Bad arguments: wrong dimension, malformed config files, values out of range.
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A point fails the model constraint of its space (off the hyperboloid sheet,
// wrong ambient dimension, non-finite coordinates).
struct InvalidPointError : InputError {
    using InputError::InputError;
};

// Chart evaluation outside the chart's radius.
struct ChartDomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Work or memory would exceed a configured cap (e.g. expected point count).
struct ResourceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A certified computation could not reach its target (degenerate input,
// failed coverage check, witness search that cannot be settled).
struct CertificationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Geometric construction failed (degenerate tessellation input and similar).
struct ConstructionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace curvo
