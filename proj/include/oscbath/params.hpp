// params.hpp — shared domain types (units: hbar = k_B = mass = 1)
#pragma once

#include <cmath>

#include "oscbath/errors.hpp"

namespace oscbath {

struct SystemParams {
    double omega0 = 1.0; // subsystem frequency
    double beta = 1.0;   // reciprocal temperature

    void validate() const {
        if (!(omega0 > 0.0)) throw InvalidParam("SystemParams: omega0 must be > 0");
        if (!(beta > 0.0)) throw InvalidParam("SystemParams: beta must be > 0");
    }
};

// Ohmic spectral density J(w) = eta*w for 0 < w < cutoff, zero elsewhere.
// eta == 0 is the degenerate uncoupled limit: the closed-form evaluators
// accept it, anything that integrates against J rejects it via validate().
struct OhmicSpectrum {
    double eta = 0.2;     // friction coefficient
    double cutoff = 20.0; // highest bath frequency

    void validate() const {
        if (!(eta > 0.0)) throw InvalidParam("OhmicSpectrum: eta must be > 0");
        if (!(cutoff > 0.0)) throw InvalidParam("OhmicSpectrum: cutoff must be > 0");
    }
};

// Second moments of the subsystem oscillator in thermal equilibrium.
struct EquilibriumMoments {
    double p2 = 0.0;    // <P0^2>
    double q2 = 0.0;    // <Q0^2>
    double cross = 0.0; // symmetrized <{P0,Q0}>/2, zero in equilibrium
};

inline double coth(double x) { return 1.0 / std::tanh(x); }

} // namespace oscbath
