// spectral.hpp — continuum-bath closed forms: ohmic spectral density,
// retarded Green function g(z), exact interacting-equilibrium moments
#pragma once

#include <array>
#include <complex>

#include "oscbath/params.hpp"
#include "oscbath/quadrature.hpp"

namespace oscbath::spectral {

// Side from which a real-axis point inside the branch cut is approached.
// Below = w - i0+ (retarded convention used throughout).
enum class BoundarySide { None, Below, Above };

// J(w) = eta*w on (0, cutoff), zero elsewhere. Total function.
double j_value(const OhmicSpectrum& spec, double omega) noexcept;

// Inverse Green function g^{-1}(z) = z^2 - omega0^2 - (eta z / pi) *
// Log((z + cutoff)/(z - cutoff)), principal branch, even in z. The branch
// cut is the real segment [-cutoff, cutoff]; evaluation there requires a
// side flag (limits taken from Im z < 0 for Below), except z = 0 where the
// counterterm cancellation gives exactly -omega0^2.
std::complex<double> g_inverse_continuum(const SystemParams& sys, const OhmicSpectrum& spec,
                                         std::complex<double> z,
                                         BoundarySide side = BoundarySide::None);

// g(w - i0+) = 1 / g^{-1}(w - i0+) for 0 <= w.
std::complex<double> g_boundary(const SystemParams& sys, const OhmicSpectrum& spec, double omega);

// Im g(w - i0+) on [0, cutoff], computed from the full closed form.
double im_g_boundary(const SystemParams& sys, const OhmicSpectrum& spec, double omega);

// Exact interacting-equilibrium moments by spectral integration:
//   <P0^2> = int_0^cutoff dw/pi * 2w Im g(w-i0+) * (w/2) coth(beta w/2)
//   <Q0^2> = same with weight coth(beta w/2)/(2w)
// Adaptive quadrature with forced subdivision at the resonance neighborhood
// {omega0 - 2 eta, omega0, omega0 + 2 eta} and just below the cutoff.
EquilibriumMoments equilibrium_moments(const SystemParams& sys, const OhmicSpectrum& spec,
                                       const quad::Options& opt = {});

// ln A(u, v) = -u^2 <P0^2>/2 - v^2 <Q0^2>/2 + i u v / 2.
std::complex<double> log_char_exact(const EquilibriumMoments& m, double u, double v);

// Poles of the analytically continued Im g. Underdamped (eta < 2 omega0):
// +-Omega +- i eta/2 with Omega^2 = omega0^2 - eta^2/4. Otherwise the four
// purely imaginary roots of (w^2 - omega0^2)^2 + w^2 eta^2 = 0.
struct PoleSet {
    std::array<std::complex<double>, 4> poles;
    bool overdamped = false;
};
PoleSet complex_poles(const SystemParams& sys, const OhmicSpectrum& spec);

} // namespace oscbath::spectral
