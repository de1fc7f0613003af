// errors.hpp — exception taxonomy shared by all oscbath modules
#pragma once

#include <stdexcept>

namespace oscbath {

struct InvalidParam : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

// Real-axis evaluation of a function that is branch-cut there without an
// explicit boundary side.
struct BranchCutError : std::domain_error {
    using std::domain_error::domain_error;
};

struct QuadratureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Secular-function evaluation at (or too close to) a bath pole.
struct PoleError : std::domain_error {
    using std::domain_error::domain_error;
};

// Bracketing failed: degenerate bath input (duplicate frequencies, zero
// couplings on a subset of modes).
struct RootCountError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DegenerateModeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GridError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct IndexError : std::out_of_range {
    using std::out_of_range::out_of_range;
};

struct WindowError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Residuals within the fit window have reached the numerical floor.
struct UnderflowError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Decay-rate extraction requested for eta >= 2*omega0.
struct OverdampedError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace oscbath
