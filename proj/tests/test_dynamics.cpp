#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <thread>
#include <vector>

#include <Eigen/Dense>

#include "oscbath/bath.hpp"
#include "oscbath/dynamics.hpp"
#include "oscbath/modes.hpp"
#include "oscbath/spectral.hpp"

using namespace oscbath;

namespace {

const SystemParams kSys{1.0, 2.0};
const OhmicSpectrum kSpec{0.2, 20.0};

modes::NormalModes make_modes(Eigen::Index n) {
    const auto b = bath::discretize(kSpec, n);
    return modes::mode_matrix(kSys, b, modes::solve_modes(kSys, b));
}

Eigen::VectorXd linspace(double a, double b, Eigen::Index n) {
    return Eigen::VectorXd::LinSpaced(n, a, b);
}

} // namespace

TEST_CASE("thermal occupations: zero-point, classical and the P = W^2 Q identity") {
    bath::DiscretizedBath b;
    b.omegas = Eigen::VectorXd::Constant(1, 2.0);
    b.alphas = Eigen::VectorXd::Constant(1, 1.0);

    const auto cold = dynamics::thermal_occupations({1.0, 1e3}, b);
    CHECK(cold.p2[1] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(cold.q2[1] == doctest::Approx(0.25).epsilon(1e-12));

    const auto hot = dynamics::thermal_occupations({1.0, 0.01}, b);
    CHECK(hot.p2[0] == doctest::Approx(100.0).epsilon(1e-4));

    const auto occ = dynamics::thermal_occupations(kSys, b);
    for (Eigen::Index i = 0; i < 2; ++i) {
        const double w = i == 0 ? kSys.omega0 : b.omegas[i - 1];
        CHECK(occ.p2[i] == doctest::Approx(w * w * occ.q2[i]).epsilon(1e-15));
    }

    const auto cls = dynamics::thermal_occupations(kSys, b, dynamics::Occupation::Classical);
    CHECK(cls.p2[0] == doctest::Approx(1.0 / kSys.beta).epsilon(1e-15));
    CHECK(cls.q2[1] == doctest::Approx(1.0 / (kSys.beta * 4.0)).epsilon(1e-15));
}

TEST_CASE("propagator at t = 0 is the Kronecker delta on the system row") {
    const auto nm = make_modes(100);
    const auto pc = dynamics::propagator_coefficients(nm, 0.0);
    CHECK(std::abs(pc.xc[0] - 1.0) < 1e-12);
    CHECK(pc.xc.tail(100).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((pc.xs.array() == 0.0).all());
    CHECK((pc.xbars.array() == 0.0).all());
    CHECK_THROWS_AS(dynamics::propagator_coefficients(nm, -1.0), GridError);
}

TEST_CASE("uncoupled propagator is free evolution") {
    const auto b = bath::uncoupled(20.0, 12);
    const auto nm = modes::mode_matrix(kSys, b, modes::solve_modes(kSys, b));
    const double t = 1.7;
    const auto pc = dynamics::propagator_coefficients(nm, t);
    CHECK(pc.xc[0] == doctest::Approx(std::cos(t)).epsilon(1e-15));
    CHECK(pc.xs[0] == doctest::Approx(std::sin(t)).epsilon(1e-15));
    CHECK(pc.xbars[0] == doctest::Approx(std::sin(t)).epsilon(1e-15));
    CHECK(pc.xc.tail(12).cwiseAbs().maxCoeff() == 0.0);
    CHECK(pc.xs.tail(12).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("commutator sum stays one") {
    const auto nm = make_modes(100);
    const auto occ = dynamics::thermal_occupations(kSys, bath::discretize(kSpec, 100));
    for (double t : {0.0, 0.3, 2.0, 11.0, 42.0}) {
        const auto cp = dynamics::evolved_covariance(nm, occ, t);
        CHECK(std::abs(cp.comm - 1.0) < 1e-12);
    }
}

TEST_CASE("evolved covariance at t = 0 equals the uncoupled thermal moments") {
    const auto b = bath::discretize(kSpec, 100);
    const auto nm = modes::mode_matrix(kSys, b, modes::solve_modes(kSys, b));
    const auto occ = dynamics::thermal_occupations(kSys, b);
    const auto cp = dynamics::evolved_covariance(nm, occ, 0.0);
    CHECK(cp.p2 == doctest::Approx(occ.p2[0]).epsilon(1e-12));
    CHECK(cp.q2 == doctest::Approx(occ.q2[0]).epsilon(1e-12));
    CHECK(std::abs(cp.pq) < 1e-13);
    CHECK(cp.comm == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("zero coupling keeps the thermal state stationary") {
    const auto b = bath::uncoupled(20.0, 12);
    const auto nm = modes::mode_matrix(kSys, b, modes::solve_modes(kSys, b));
    const auto occ = dynamics::thermal_occupations(kSys, b);
    const auto traj = dynamics::trajectory(nm, occ, linspace(0.0, 20.0, 401));
    CHECK((traj.p2.array() - traj.p2[0]).abs().maxCoeff() < 1e-14 * traj.p2[0]);
    CHECK((traj.q2.array() - traj.q2[0]).abs().maxCoeff() < 1e-14 * traj.q2[0]);
    CHECK(traj.pq.cwiseAbs().maxCoeff() < 1e-15);
    CHECK(traj.max_comm_deviation() < 1e-15);
}

TEST_CASE("direct and gram engines agree") {
    const auto b = bath::discretize(kSpec, 150);
    const auto nm = modes::mode_matrix(kSys, b, modes::solve_modes(kSys, b));
    const auto occ = dynamics::thermal_occupations(kSys, b);
    const auto grid = linspace(0.0, 10.0, 101);

    dynamics::TrajectoryOptions direct;
    direct.engine = dynamics::Engine::Direct;
    dynamics::TrajectoryOptions gram;
    gram.engine = dynamics::Engine::Gram;
    gram.block = 17; // odd block size to exercise the tail block

    const auto a = dynamics::trajectory(nm, occ, grid, direct);
    const auto g = dynamics::trajectory(nm, occ, grid, gram);
    CHECK((a.p2 - g.p2).cwiseAbs().maxCoeff() < 1e-11);
    CHECK((a.q2 - g.q2).cwiseAbs().maxCoeff() < 1e-11);
    CHECK((a.pq - g.pq).cwiseAbs().maxCoeff() < 1e-11);
    CHECK((a.comm - g.comm).cwiseAbs().maxCoeff() < 1e-11);
}

TEST_CASE("single-entry grid reproduces the pointwise evaluation") {
    const auto b = bath::discretize(kSpec, 40);
    const auto nm = modes::mode_matrix(kSys, b, modes::solve_modes(kSys, b));
    const auto occ = dynamics::thermal_occupations(kSys, b);
    const auto traj = dynamics::trajectory(nm, occ, Eigen::VectorXd::Zero(1));
    const auto cp = dynamics::evolved_covariance(nm, occ, 0.0);
    REQUIRE(traj.times.size() == 1);
    CHECK(traj.p2[0] == doctest::Approx(cp.p2).epsilon(1e-15));
    CHECK(traj.q2[0] == doctest::Approx(cp.q2).epsilon(1e-15));
    CHECK(traj.comm[0] == doctest::Approx(cp.comm).epsilon(1e-15));
}

TEST_CASE("trajectory validates its grid") {
    const auto b = bath::discretize(kSpec, 10);
    const auto nm = modes::mode_matrix(kSys, b, modes::solve_modes(kSys, b));
    const auto occ = dynamics::thermal_occupations(kSys, b);

    CHECK_THROWS_AS(dynamics::trajectory(nm, occ, Eigen::VectorXd()), GridError);
    Eigen::VectorXd bad(3);
    bad << 0.0, 2.0, 1.0;
    CHECK_THROWS_AS(dynamics::trajectory(nm, occ, bad), GridError);
    Eigen::VectorXd neg(2);
    neg << -1.0, 1.0;
    CHECK_THROWS_AS(dynamics::trajectory(nm, occ, neg), GridError);
}

TEST_CASE("recurrence horizon sets the warning flag") {
    const auto b = bath::discretize(kSpec, 10);
    const auto nm = modes::mode_matrix(kSys, b, modes::solve_modes(kSys, b));
    const auto occ = dynamics::thermal_occupations(kSys, b);
    dynamics::TrajectoryOptions opt;
    opt.recurrence_horizon = 5.0;
    CHECK(dynamics::trajectory(nm, occ, linspace(0.0, 10.0, 11), opt).recurrence_warning);
    CHECK_FALSE(dynamics::trajectory(nm, occ, linspace(0.0, 4.0, 5), opt).recurrence_warning);
}

TEST_CASE("uncertainty relation holds along the trajectory") {
    const auto b = bath::discretize(kSpec, 200);
    const auto nm = modes::mode_matrix(kSys, b, modes::solve_modes(kSys, b));
    const auto occ = dynamics::thermal_occupations(kSys, b);
    const auto traj = dynamics::trajectory(nm, occ, linspace(0.0, 20.0, 201));
    const Eigen::ArrayXd det =
        traj.p2.array() * traj.q2.array() - traj.pq.array() * traj.pq.array();
    CHECK(det.minCoeff() >= 0.25 - 1e-12);
}

TEST_CASE("asymptotic coefficients: bounds, t = 0 offset, weak-coupling limit") {
    const auto b = bath::discretize(kSpec, 100);
    CHECK_THROWS_AS(dynamics::asymptotic_coefficients(kSys, kSpec, b, 0, 1.0), IndexError);
    CHECK_THROWS_AS(dynamics::asymptotic_coefficients(kSys, kSpec, b, 101, 1.0), IndexError);

    // at t = 0 the non-decaying part alone does not vanish: the omitted
    // transients carry the cancellation
    const Eigen::Index k = 11;
    const auto [xc0, xb0] = dynamics::asymptotic_coefficients(kSys, kSpec, b, k, 0.0);
    const auto g = spectral::g_boundary(kSys, kSpec, b.omegas[k - 1]);
    CHECK(xc0 == doctest::Approx(b.alphas[k - 1] * g.real()).epsilon(1e-14));
    CHECK(std::abs(xc0) > 0.01 * b.alphas[k - 1]);
    CHECK(xb0 == doctest::Approx(b.alphas[k - 1] * b.omegas[k - 1] * g.imag()).epsilon(1e-14));

    // eta -> 0 with Omega_k far from resonance: xc ~ alpha cos/(W^2 - W0^2)
    const OhmicSpectrum weak{1e-6, 20.0};
    const auto bw = bath::discretize(weak, 100);
    const Eigen::Index kk = 10; // Omega = 1.9
    const double w = bw.omegas[kk - 1];
    for (double t : {0.0, 0.9, 3.3}) {
        const auto [xc, xb] = dynamics::asymptotic_coefficients(kSys, weak, bw, kk, t);
        const double expected = bw.alphas[kk - 1] * std::cos(w * t) / (w * w - 1.0);
        CHECK(xc == doctest::Approx(expected).epsilon(1e-4));
        const double expected_b = bw.alphas[kk - 1] * w * std::sin(w * t) / (w * w - 1.0);
        CHECK(xb == doctest::Approx(expected_b).epsilon(1e-4));
    }
}

TEST_CASE("stationary p2: discrete vs integral and the weak-coupling limit") {
    const auto b = bath::discretize(kSpec, 1200);
    const double disc = dynamics::stationary_p2(kSys, kSpec, b, dynamics::StationaryForm::Discrete);
    const double intg = dynamics::stationary_p2(kSys, kSpec, b, dynamics::StationaryForm::Integral);
    CHECK(std::abs(disc - intg) / intg < 5e-3);

    // identical to the equilibrium-moment integral by construction
    CHECK(intg == spectral::equilibrium_moments(kSys, kSpec).p2);

    // weak coupling with a comb fine enough to resolve the resonance
    const OhmicSpectrum weak{0.05, 20.0};
    const auto bfine = bath::discretize(weak, 4800);
    const double p2_iso = 0.5 * kSys.omega0 * coth(0.5 * kSys.beta * kSys.omega0);
    const double dw = dynamics::stationary_p2(kSys, weak, bfine, dynamics::StationaryForm::Discrete);
    const double iw = dynamics::stationary_p2(kSys, weak, bfine, dynamics::StationaryForm::Integral);
    CHECK(std::abs(dw - p2_iso) / p2_iso < 0.06);
    CHECK(std::abs(iw - p2_iso) / p2_iso < 0.06);
    CHECK(std::abs(dw - iw) / iw < 5e-3);
}

TEST_CASE("shared modes evaluate identically from concurrent threads") {
    const auto b = bath::discretize(kSpec, 80);
    const auto nm = modes::mode_matrix(kSys, b, modes::solve_modes(kSys, b));
    const auto occ = dynamics::thermal_occupations(kSys, b);

    std::array<std::vector<dynamics::CovariancePoint>, 2> got;
    auto worker = [&](int slot) {
        auto& out = got[slot];
        out.reserve(32);
        for (int i = 0; i < 32; ++i)
            out.push_back(dynamics::evolved_covariance(nm, occ, 0.25 * i));
    };
    std::thread t0(worker, 0), t1(worker, 1);
    t0.join();
    t1.join();
    for (int i = 0; i < 32; ++i) {
        CHECK(got[0][i].p2 == got[1][i].p2);
        CHECK(got[0][i].q2 == got[1][i].q2);
        CHECK(got[0][i].pq == got[1][i].pq);
        CHECK(std::abs(got[0][i].comm - 1.0) < 1e-12);
    }
}

TEST_CASE("finite-bath moments: quantum sums and classical identities") {
    const auto b = bath::discretize(kSpec, 400);
    const auto roots = modes::solve_modes(kSys, b);
    const auto nm = modes::mode_matrix(kSys, b, roots);

    // row-0 route equals the full-matrix route
    const auto a = dynamics::finite_bath_moments(kSys, b, roots);
    const auto m = dynamics::mode_thermal_moments(nm, kSys.beta);
    CHECK(a.p2 == doctest::Approx(m.p2).epsilon(1e-14));
    CHECK(a.q2 == doctest::Approx(m.q2).epsilon(1e-14));

    // classical occupation telescopes to completeness and marginalization
    const SystemParams cold{1.0, 0.01};
    const auto cls = dynamics::finite_bath_moments(cold, b, roots, dynamics::Occupation::Classical);
    CHECK(std::abs(cold.beta * cls.p2 - 1.0) < 1e-10);
    CHECK(std::abs(cold.beta * cls.q2 * cold.omega0 * cold.omega0 - 1.0) < 1e-9);

    // independent oracle for the marginalization identity: (V^{-1})_00 = 1/omega0^2
    Eigen::MatrixXd V = Eigen::MatrixXd::Zero(b.n() + 1, b.n() + 1);
    V(0, 0) = bath::bare_frequency_squared(kSys, b);
    for (Eigen::Index k = 0; k < b.n(); ++k) {
        V(0, k + 1) = V(k + 1, 0) = b.alphas[k];
        V(k + 1, k + 1) = b.omegas[k] * b.omegas[k];
    }
    Eigen::VectorXd e0 = Eigen::VectorXd::Zero(b.n() + 1);
    e0[0] = 1.0;
    const double vinv00 = V.ldlt().solve(e0)[0];
    CHECK(vinv00 == doctest::Approx(1.0 / (kSys.omega0 * kSys.omega0)).epsilon(1e-10));
}
