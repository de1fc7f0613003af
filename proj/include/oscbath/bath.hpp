// bath.hpp — finite bath {Omega_k, alpha_k} reproducing a continuum
// spectral density as a quadrature rule
#pragma once

#include <Eigen/Core>

#include "oscbath/params.hpp"

namespace oscbath::bath {

enum class Scheme { Midpoint, Gauss };

struct DiscretizedBath {
    Eigen::VectorXd omegas; // Omega_k, strictly increasing, in (0, cutoff]
    Eigen::VectorXd alphas; // alpha_k >= 0 (positive square roots by convention)

    Eigen::Index n() const { return omegas.size(); }
};

// Places n modes so that (pi/2) sum_k alpha_k^2/Omega_k delta(w - Omega_k)
// coarse-grains to J(w):
//   Midpoint: Omega_k = (k - 1/2) * cutoff/n, alpha_k^2 = (2/pi) J Omega_k d
//   Gauss:    Gauss-Legendre nodes/weights mapped to (0, cutoff)
DiscretizedBath discretize(const OhmicSpectrum& spec, Eigen::Index n,
                           Scheme scheme = Scheme::Midpoint);

// Midpoint frequency comb with all couplings zero (free-evolution control).
DiscretizedBath uncoupled(double cutoff, Eigen::Index n);

// "Bare" system frequency squared: omega0^2 + sum_k alpha_k^2/Omega_k^2.
double bare_frequency_squared(const SystemParams& sys, const DiscretizedBath& bath);

// Earliest rephasing time of the discrete frequency comb, 2*pi/min spacing.
// Simulations must keep t_max safely below this horizon.
double recurrence_estimate(const DiscretizedBath& bath);

// Gauss-Legendre nodes and weights on (-1, 1), ascending nodes.
void gauss_legendre(Eigen::Index n, Eigen::VectorXd& nodes, Eigen::VectorXd& weights);

} // namespace oscbath::bath
