#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "oscbath/bath.hpp"
#include "oscbath/dynamics.hpp"
#include "oscbath/modes.hpp"
#include "oscbath/spectral.hpp"

using namespace oscbath;
using std::complex;

namespace {
const SystemParams kSys{1.0, 2.0};
const OhmicSpectrum kSpec{0.2, 20.0};
} // namespace

TEST_CASE("j_value piecewise linear law") {
    CHECK(spectral::j_value(kSpec, 1.0) == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(spectral::j_value(kSpec, 25.0) == 0.0);
    CHECK(spectral::j_value(kSpec, 0.0) == 0.0);
    CHECK(spectral::j_value(kSpec, 20.0) == 0.0);
}

TEST_CASE("g_inverse at z = 0 is minus omega0 squared") {
    const auto v = spectral::g_inverse_continuum(kSys, kSpec, {0.0, 0.0});
    CHECK(v.real() == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(v.imag() == 0.0);
}

TEST_CASE("boundary value has Im g_inverse = -J") {
    for (double w : {0.3, 1.0, 5.0, 19.5}) {
        const auto v =
            spectral::g_inverse_continuum(kSys, kSpec, {w, 0.0}, spectral::BoundarySide::Below);
        CHECK(v.imag() == doctest::Approx(-spectral::j_value(kSpec, w)).epsilon(1e-15));
        // the Above side is the conjugate, and evenness swaps the effective
        // side for negative real frequencies
        const auto a =
            spectral::g_inverse_continuum(kSys, kSpec, {w, 0.0}, spectral::BoundarySide::Above);
        CHECK(a == std::conj(v));
        const auto n =
            spectral::g_inverse_continuum(kSys, kSpec, {-w, 0.0}, spectral::BoundarySide::Below);
        CHECK(n == std::conj(v));
    }
}

TEST_CASE("real axis inside the cut without a side flag raises") {
    CHECK_THROWS_AS(spectral::g_inverse_continuum(kSys, kSpec, {1.0, 0.0}), BranchCutError);
    CHECK_THROWS_AS(spectral::g_inverse_continuum(kSys, kSpec, {-3.0, 0.0}), BranchCutError);
    // outside the cut the real closed form is fine
    CHECK_NOTHROW(spectral::g_inverse_continuum(kSys, kSpec, {25.0, 0.0}));
}

TEST_CASE("large-cutoff limit below the axis") {
    const OhmicSpectrum wide{0.2, 2e6};
    const complex<double> z{0.3, -0.4};
    const auto v = spectral::g_inverse_continuum(kSys, wide, z);
    const complex<double> limit = z * z - 1.0 - complex<double>{0.0, 1.0} * wide.eta * z;
    CHECK(std::abs(v - limit) < 1e-5 * std::abs(limit));
}

TEST_CASE("conjugate symmetry of g_inverse") {
    for (const complex<double> z :
         {complex<double>{0.7, 1.3}, {3.0, -2.0}, {-1.5, 0.4}, {0.0, 5.0}, {30.0, 1.0}}) {
        const auto a = spectral::g_inverse_continuum(kSys, kSpec, z);
        const auto b = spectral::g_inverse_continuum(kSys, kSpec, std::conj(z));
        CHECK(std::abs(b - std::conj(a)) < 1e-14 * std::abs(a));
    }
}

TEST_CASE("Im g at resonance approaches 1/(eta omega0)") {
    const OhmicSpectrum wide{0.2, 2000.0};
    CHECK(spectral::im_g_boundary(kSys, wide, 1.0) == doctest::Approx(5.0).epsilon(1e-4));
    // finite cutoff leaves only the log correction
    CHECK(spectral::im_g_boundary(kSys, kSpec, 1.0) == doctest::Approx(5.0).epsilon(2e-3));
}

TEST_CASE("Im g vanishes at the edges and rejects outside points") {
    CHECK(spectral::im_g_boundary(kSys, kSpec, 0.0) == 0.0);
    CHECK(spectral::im_g_boundary(kSys, kSpec, 20.0) == 0.0);
    CHECK_THROWS_AS(spectral::im_g_boundary(kSys, kSpec, -0.1), DomainError);
    CHECK_THROWS_AS(spectral::im_g_boundary(kSys, kSpec, 20.1), DomainError);
}

TEST_CASE("closed form agrees with the wide-band lorentzian at omega = 2") {
    const double w = 2.0;
    const double lorentz =
        kSpec.eta * w / (std::pow(w * w - 1.0, 2) + w * w * kSpec.eta * kSpec.eta);
    const double exact = spectral::im_g_boundary(kSys, kSpec, w);
    CHECK(std::abs(exact / lorentz - 1.0) < 0.02);
}

TEST_CASE("Im g is nonnegative across the band") {
    for (int i = 1; i < 400; ++i) {
        const double w = kSpec.cutoff * i / 400.0;
        CHECK(spectral::im_g_boundary(kSys, kSpec, w) >= 0.0);
    }
}

TEST_CASE("equilibrium moments approach the isolated oscillator as eta -> 0") {
    const double p2_iso = 0.5 * kSys.omega0 * coth(0.5 * kSys.beta * kSys.omega0);
    const double q2_iso = coth(0.5 * kSys.beta * kSys.omega0) / (2.0 * kSys.omega0);

    double prev_err_p = 1e9, prev_err_q = 1e9;
    for (double eta : {0.04, 0.02, 0.01, 0.005}) {
        const auto m = spectral::equilibrium_moments(kSys, {eta, 20.0});
        const double ep = std::abs(m.p2 - p2_iso) / p2_iso;
        const double eq = std::abs(m.q2 - q2_iso) / q2_iso;
        CHECK(ep < prev_err_p);
        CHECK(eq < prev_err_q);
        prev_err_p = ep;
        prev_err_q = eq;
    }
    // residual coupling corrections scale like eta (log-enhanced for p2)
    CHECK(prev_err_p < 8e-3);
    CHECK(prev_err_q < 2e-3);
}

TEST_CASE("equilibrium moments match the finite-bath spectral sum at N = 4000") {
    const auto m = spectral::equilibrium_moments(kSys, kSpec);
    const auto b = bath::discretize(kSpec, 4000);
    const auto roots = modes::solve_modes(kSys, b);
    const auto sums = dynamics::finite_bath_moments(kSys, b, roots);
    CHECK(std::abs(sums.p2 - m.p2) / m.p2 < 2e-3);
    CHECK(std::abs(sums.q2 - m.q2) / m.q2 < 2e-3);
}

TEST_CASE("classical regime: beta p2 -> 1 with O(beta^2) corrections") {
    const SystemParams cold{1.0, 0.01};
    const auto m = spectral::equilibrium_moments(cold, kSpec);
    CHECK(std::abs(cold.beta * m.p2 - 1.0) < 1e-4);
}

TEST_CASE("uncertainty bound p2 q2 >= 1/4 across parameters") {
    for (double omega0 : {0.5, 1.0, 2.0}) {
        for (double eta : {0.05, 0.2, 0.8}) {
            for (double beta : {0.1, 1.0, 10.0}) {
                for (double cutoff : {8.0, 20.0}) {
                    const auto m = spectral::equilibrium_moments({omega0, beta}, {eta, cutoff});
                    CHECK(m.p2 * m.q2 >= 0.25);
                    CHECK(m.p2 > 0.0);
                    CHECK(m.q2 > 0.0);
                    CHECK(m.cross == 0.0);
                }
            }
        }
    }
}

TEST_CASE("equilibrium moments validate their inputs") {
    CHECK_THROWS_AS(spectral::equilibrium_moments({1.0, 2.0}, {0.0, 20.0}), InvalidParam);
    CHECK_THROWS_AS(spectral::equilibrium_moments({-1.0, 2.0}, kSpec), InvalidParam);
}

TEST_CASE("exhausted segment budget surfaces as QuadratureError") {
    quad::Options opt;
    opt.rel_tol = 1e-14;
    opt.max_segments = 5;
    CHECK_THROWS_AS(spectral::equilibrium_moments(kSys, kSpec, opt), QuadratureError);
}

TEST_CASE("log characteristic function") {
    EquilibriumMoments m{0.5, 0.5, 0.0};
    CHECK(spectral::log_char_exact(m, 0.0, 0.0) == complex<double>{0.0, 0.0});
    CHECK(spectral::log_char_exact(m, 1.0, 0.0).real() == doctest::Approx(-0.25));
    const auto v = spectral::log_char_exact(m, 1.0, 1.0);
    CHECK(v.real() == doctest::Approx(-0.5));
    CHECK(v.imag() == doctest::Approx(0.5));
}

TEST_CASE("complex poles: underdamped quartet") {
    const auto ps = spectral::complex_poles(kSys, kSpec);
    CHECK_FALSE(ps.overdamped);
    const double re = std::sqrt(0.99);
    bool found = false;
    for (const auto& p : ps.poles)
        if (std::abs(p - complex<double>{re, 0.1}) < 1e-14) found = true;
    CHECK(found);
    for (const auto& p : ps.poles) {
        CHECK(std::abs(std::abs(p.real()) - re) < 1e-14);
        CHECK(std::abs(std::abs(p.imag()) - 0.1) < 1e-14);
    }
}

TEST_CASE("complex poles: undamped degenerate pair") {
    const auto ps = spectral::complex_poles(kSys, {0.0, 20.0});
    CHECK_FALSE(ps.overdamped);
    for (const auto& p : ps.poles) {
        CHECK(std::abs(p.real()) == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(p.imag() == 0.0);
    }
}

TEST_CASE("complex poles: critical damping gives double poles at +-i") {
    const auto ps = spectral::complex_poles(kSys, {2.0, 20.0});
    CHECK(ps.overdamped);
    for (const auto& p : ps.poles) {
        CHECK(p.real() == 0.0);
        CHECK(std::abs(std::abs(p.imag()) - 1.0) < 1e-12);
    }
}

TEST_CASE("complex poles: overdamped roots solve the quartic") {
    const OhmicSpectrum heavy{3.0, 20.0};
    const auto ps = spectral::complex_poles(kSys, heavy);
    CHECK(ps.overdamped);
    for (const auto& p : ps.poles) {
        CHECK(p.real() == 0.0);
        const auto w2 = p * p;
        const auto quartic = (w2 - 1.0) * (w2 - 1.0) + w2 * heavy.eta * heavy.eta;
        CHECK(std::abs(quartic) < 1e-12);
    }
    // exact magnitudes (3 +- sqrt(5))/2
    double lo = 1e9, hi = 0.0;
    for (const auto& p : ps.poles) {
        lo = std::min(lo, std::abs(p.imag()));
        hi = std::max(hi, std::abs(p.imag()));
    }
    CHECK(lo == doctest::Approx((3.0 - std::sqrt(5.0)) / 2.0).epsilon(1e-13));
    CHECK(hi == doctest::Approx((3.0 + std::sqrt(5.0)) / 2.0).epsilon(1e-13));
}
