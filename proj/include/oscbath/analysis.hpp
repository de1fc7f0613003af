// analysis.hpp — post-processing of covariance trajectories: envelope decay
// rate, equilibration time, finite-bath recurrence detection
#pragma once

#include <optional>
#include <vector>

#include "oscbath/dynamics.hpp"
#include "oscbath/params.hpp"

namespace oscbath::analysis {

enum class Channel { P2, Q2 };

struct Window {
    double lo = 0.0;
    double hi = 0.0;
};

struct DecayFit {
    double rate = 0.0;        // fitted exponential rate of the residual envelope
    double rate_stderr = 0.0; // OLS standard error of the rate
    Window window;
    EquilibriumMoments target;
    int n_peaks = 0;
};

struct EnvelopePoint {
    double t = 0.0;
    double r = 0.0;
};

// Local maxima of |channel(t) - eq_value| restricted to the window.
std::vector<EnvelopePoint> residual_envelope(const dynamics::CovarianceTrajectory& traj,
                                             double eq_value, Channel channel,
                                             const Window& window);

// Least-squares fit of log-envelope vs t. noise_floor is the level below
// which residuals are considered floor-dominated (the caller typically
// passes the discrete-vs-continuum equilibrium offset); any envelope point
// below 10x the floor raises UnderflowError. Overdamped parameter sets
// (eta >= 2 omega0) are rejected.
DecayFit fit_decay_rate(const dynamics::CovarianceTrajectory& traj, const EquilibriumMoments& eq,
                        Channel channel, const Window& window, const SystemParams& sys,
                        const OhmicSpectrum& spec, double noise_floor = 0.0);

// First t* such that both relative residuals stay below rel_tol on
// [t*, t_max]; empty optional when not reached by the end of the grid.
std::optional<double> equilibration_time(const dynamics::CovarianceTrajectory& traj,
                                         const EquilibriumMoments& eq, double rel_tol);

// Earliest time after equilibration at which the combined residual envelope
// re-exceeds 3x its plateau level; empty when the trajectory never decays
// by a factor of 10 or never revives.
std::optional<double> detect_recurrence(const dynamics::CovarianceTrajectory& traj,
                                        const EquilibriumMoments& eq);

} // namespace oscbath::analysis
