// dynamics.hpp — time evolution of the uncoupled thermal state under the
// full coupled Hamiltonian: propagator coefficients, covariance trajectory,
// asymptotic/stationary formulas
#pragma once

#include <limits>
#include <utility>

#include <Eigen/Core>

#include "oscbath/bath.hpp"
#include "oscbath/modes.hpp"
#include "oscbath/params.hpp"
#include "oscbath/quadrature.hpp"

namespace oscbath::dynamics {

// Classical replaces coth(beta w/2) by its small-argument limit 2/(beta w),
// turning the spectral sums into pure completeness/marginalization identities.
enum class Occupation { Quantum, Classical };

// Uncoupled thermal second moments per oscillator, index 0 = system.
struct ThermalOccupations {
    Eigen::VectorXd p2; // <P_i^2>_0
    Eigen::VectorXd q2; // <Q_i^2>_0
};
ThermalOccupations thermal_occupations(const SystemParams& sys, const bath::DiscretizedBath& bath,
                                       Occupation model = Occupation::Quantum);

// The three coefficient arrays
//   xc_i    = sum_v X_0v X_iv cos(w_v t)
//   xs_i    = sum_v X_0v X_iv sin(w_v t)/w_v
//   xbars_i = sum_v X_0v X_iv w_v sin(w_v t)
struct PropagatorCoefficients {
    double t = 0.0;
    Eigen::VectorXd xc, xs, xbars;
};
PropagatorCoefficients propagator_coefficients(const modes::NormalModes& nm, double t);

// Quadratic-form coefficients of the evolved Gaussian characteristic
// function, plus the commutator sum (identically 1 for exact orthogonality).
struct CovariancePoint {
    double p2 = 0.0;   // sum_i xc^2 <P^2>_0 + xbars^2 <Q^2>_0
    double q2 = 0.0;   // sum_i xc^2 <Q^2>_0 + xs^2 <P^2>_0
    double pq = 0.0;   // sum_i xc xs <P^2>_0 - xbars xc <Q^2>_0
    double comm = 0.0; // sum_i xc^2 + xbars xs
};
CovariancePoint evolved_covariance(const modes::NormalModes& nm, const ThermalOccupations& occ,
                                   double t);

struct CovarianceTrajectory {
    Eigen::VectorXd times, p2, q2, pq, comm;
    bool recurrence_warning = false;

    double max_comm_deviation() const { return (comm.array() - 1.0).abs().maxCoeff(); }
};

enum class Engine {
    Auto,   // Gram above 400 bath modes, Direct otherwise
    Direct, // oscillator-space coefficient vectors, 3 GEMMs per block
    Gram    // precomputed X^T diag(w) X, quadratic forms in mode space
};

struct TrajectoryOptions {
    Engine engine = Engine::Auto;
    Eigen::Index block = 256; // time points per GEMM block
    double recurrence_horizon = std::numeric_limits<double>::infinity();
};

// Evaluates the covariance on each grid point. Grid must be non-empty,
// strictly increasing and non-negative (GridError otherwise); exceeding the
// recurrence horizon sets recurrence_warning.
CovarianceTrajectory trajectory(const modes::NormalModes& nm, const ThermalOccupations& occ,
                                const Eigen::VectorXd& t_grid, const TrajectoryOptions& opt = {});

// Non-decaying parts of (xc_k, xbars_k) from the continuum Green function
// at the bath frequency (the decaying remainder is omitted by construction):
//   xc_k    ~ alpha_k [Re g cos(W_k t) - Im g sin(W_k t)]
//   xbars_k ~ alpha_k W_k [Re g sin(W_k t) + Im g cos(W_k t)]
// k is 1-based: 1 <= k <= N.
std::pair<double, double> asymptotic_coefficients(const SystemParams& sys,
                                                  const OhmicSpectrum& spec,
                                                  const bath::DiscretizedBath& bath,
                                                  Eigen::Index k, double t);

// Stationary momentum moment, two routes that converge to each other as
// the bath is refined:
//   Discrete: sum_k alpha_k^2 (W_k/2) coth(beta W_k/2) |g(W_k - i0+)|^2
//   Integral: the continuum spectral integral (same object as
//             equilibrium_moments().p2 by construction)
enum class StationaryForm { Discrete, Integral };
double stationary_p2(const SystemParams& sys, const OhmicSpectrum& spec,
                     const bath::DiscretizedBath& bath, StationaryForm form,
                     const quad::Options& opt = {});

// Thermal moments of the coupled finite system (normal modes thermalized at
// beta), from row-0 weights only: p2 = sum_v X_0v^2 (w_v/2) coth(beta w_v/2).
// This is the finite-bath counterpart of the continuum equilibrium integral.
EquilibriumMoments finite_bath_moments(const SystemParams& sys, const bath::DiscretizedBath& bath,
                                       const modes::SecularRoots& roots,
                                       Occupation model = Occupation::Quantum);
EquilibriumMoments mode_thermal_moments(const modes::NormalModes& nm, double beta,
                                        Occupation model = Occupation::Quantum);

} // namespace oscbath::dynamics
