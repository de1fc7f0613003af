#include "oscbath/spectral.hpp"

#include <cmath>

namespace oscbath::spectral {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Limit of g^{-1}(w - i0+) for w in (0, cutoff]: real part from the log
// modulus, imaginary part exactly -J(w) (the defining boundary property).
std::complex<double> boundary_below(const SystemParams& sys, const OhmicSpectrum& spec, double w) {
    const double c = spec.cutoff;
    const double re = w * w - sys.omega0 * sys.omega0 -
                      (spec.eta * w / kPi) * std::log((c + w) / (c - w));
    return {re, -spec.eta * w};
}

} // namespace

double j_value(const OhmicSpectrum& spec, double omega) noexcept {
    if (omega > 0.0 && omega < spec.cutoff) return spec.eta * omega;
    return 0.0;
}

std::complex<double> g_inverse_continuum(const SystemParams& sys, const OhmicSpectrum& spec,
                                         std::complex<double> z, BoundarySide side) {
    const double c = spec.cutoff;
    if (z.imag() == 0.0) {
        const double w = std::abs(z.real()); // g^{-1} is even in z
        if (w == 0.0) return {-sys.omega0 * sys.omega0, 0.0};
        if (w <= c) {
            if (side == BoundarySide::None)
                throw BranchCutError(
                    "g_inverse_continuum: z lies on the branch cut; specify a boundary side");
            // evenness maps -w - i0 onto w + i0, so a negative real part
            // swaps the effective side of the cut
            const bool below = (side == BoundarySide::Below) == (z.real() > 0.0);
            std::complex<double> v = boundary_below(sys, spec, w);
            if (!below) v = std::conj(v);
            return v;
        }
    }
    const std::complex<double> zz = (z.real() < 0.0) ? -z : z;
    return zz * zz - sys.omega0 * sys.omega0 -
           (spec.eta / kPi) * zz * std::log((zz + c) / (zz - c));
}

std::complex<double> g_boundary(const SystemParams& sys, const OhmicSpectrum& spec, double omega) {
    return 1.0 / g_inverse_continuum(sys, spec, {omega, 0.0}, BoundarySide::Below);
}

double im_g_boundary(const SystemParams& sys, const OhmicSpectrum& spec, double omega) {
    if (omega < 0.0 || omega > spec.cutoff)
        throw DomainError("im_g_boundary: omega must lie in [0, cutoff]");
    if (omega == 0.0 || omega == spec.cutoff) return 0.0; // J(0) = 0; log-divergent |g^{-1}| at cutoff
    const std::complex<double> ginv = boundary_below(sys, spec, omega);
    // Im 1/ginv = -Im ginv / |ginv|^2 = J(w)/|ginv|^2 >= 0
    return -ginv.imag() / std::norm(ginv);
}

EquilibriumMoments equilibrium_moments(const SystemParams& sys, const OhmicSpectrum& spec,
                                       const quad::Options& opt) {
    sys.validate();
    spec.validate();
    const double c = spec.cutoff;
    const std::array<double, 4> pts = {sys.omega0 - 2.0 * spec.eta, sys.omega0,
                                       sys.omega0 + 2.0 * spec.eta, c * (1.0 - 1e-6)};

    const auto p_integrand = [&](double w) {
        return (2.0 * w / kPi) * im_g_boundary(sys, spec, w) * 0.5 * w * coth(0.5 * sys.beta * w);
    };
    const auto q_integrand = [&](double w) {
        return (1.0 / kPi) * im_g_boundary(sys, spec, w) * coth(0.5 * sys.beta * w);
    };
    const double p2 = quad::integrate(p_integrand, 0.0, c, pts, opt).value;
    const double q2 = quad::integrate(q_integrand, 0.0, c, pts, opt).value;
    return {p2, q2, 0.0};
}

std::complex<double> log_char_exact(const EquilibriumMoments& m, double u, double v) {
    return {-0.5 * u * u * m.p2 - 0.5 * v * v * m.q2, 0.5 * u * v};
}

PoleSet complex_poles(const SystemParams& sys, const OhmicSpectrum& spec) {
    const double w0sq = sys.omega0 * sys.omega0;
    const double eta = spec.eta;
    PoleSet out;
    if (eta < 2.0 * sys.omega0) {
        const double re = std::sqrt(w0sq - 0.25 * eta * eta);
        const double im = 0.5 * eta;
        out.poles = {std::complex<double>{re, im}, {re, -im}, {-re, im}, {-re, -im}};
        out.overdamped = false;
        return out;
    }
    // (w^2)^2 + w^2 (eta^2 - 2 w0^2) + w0^4 = 0 with both w^2 roots real negative
    const double half_sum = w0sq - 0.5 * eta * eta;
    const double disc = 0.5 * eta * std::sqrt(eta * eta - 4.0 * w0sq);
    const double y_near = std::sqrt(-(half_sum + disc)); // nearest to the real axis
    const double y_far = std::sqrt(-(half_sum - disc));
    out.poles = {std::complex<double>{0.0, y_near}, {0.0, -y_near}, {0.0, y_far}, {0.0, -y_far}};
    out.overdamped = true;
    return out;
}

} // namespace oscbath::spectral
