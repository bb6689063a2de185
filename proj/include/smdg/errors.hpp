#pragma once

#include <stdexcept>
#include <string>

namespace smdg {

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad user input: invalid mesh sizes, parameter ranges, unknown config keys.
struct config_error : error {
    using error::error;
};

// Mismatched meshes/degrees between fields that must live in the same space.
struct structural_error : error {
    using error::error;
};

// Singular projection systems (alpha^2 + beta1*beta2 == 0 and friends).
struct well_posedness_error : error {
    using error::error;
};

// Non-finite state detected during time integration.
struct divergence_error : error {
    using error::error;
};

// Scheme/coefficient combination that is not supported (Taylor 2.0 with
// general diffusion).
struct unsupported_scheme_error : error {
    using error::error;
};

} // namespace smdg
